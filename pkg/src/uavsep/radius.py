"""Closed-form safety radii and the boundary conditions they rest on."""

from dataclasses import dataclass
import enum
import math

import numpy as np

from .channel import UncertaintyBudget, lambda_bound
from .core import ObstacleParams, ParameterError, VehicleParams


class MonitorVerdict(enum.Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not_applicable"


def maneuver_radius(v_m: float, v_o: float, l: float) -> float:
    """Largest gap between filtered and true separation: ``(v_m + v_o) / l``."""
    if not l > 0:
        raise ParameterError(f"maneuver constant l must be > 0 (got {l})")
    return (v_m + v_o) / l


def uncertainty_radius(budget: UncertaintyBudget, v_o: float) -> float:
    """Inflation covering estimate noise, delay and packet loss."""
    if not budget.theta_m < 1:
        raise ParameterError(f"theta_m must be < 1 (got {budget.theta_m})")
    return lambda_bound(v_o, budget.tau_dm, budget.theta_m, budget.T_s) + budget.b + budget.b_o


def designed_safety_radius(r_m: float, r_o: float, r_v: float, r_e: float) -> float:
    """Smallest designed radius keeping the true bodies apart.

    Returns ``sqrt((r_m + r_o)^2 + r_v^2) + r_e - r_o``; any larger value is
    also admissible.
    """
    if not (r_m > 0 and r_o > 0):
        raise ParameterError("r_m and r_o must be > 0")
    return math.hypot(r_m + r_o, r_v) + r_e - r_o


def practical_safety_radius(r_m: float, r_o: float, r_v: float, r_e: float) -> float:
    """Bound on the in-flight radius measured on estimated distances.

    Same expression as :func:`designed_safety_radius`; it also covers any
    number of obstacles sharing the bounds.
    """
    return designed_safety_radius(r_m, r_o, r_v, r_e)


def check_speed_condition(v_m: float, v_o: float, v_b: float, v_bo: float) -> bool:
    """True iff the UAV outruns the obstacle plus both noise rates."""
    return v_m >= v_o + v_b + v_bo


def proposition2_threshold(r: float, r_v: float) -> float:
    """Filtered separation that guarantees true separation ``r``."""
    if r < 0 or r_v < 0:
        raise ParameterError("r and r_v must be >= 0")
    return math.hypot(r, r_v)


@dataclass(frozen=True)
class RadiusReport:
    r_v: float
    r_e: float
    r_s_designed: float
    r_s_practical: float
    speed_condition_ok: bool

    @property
    def r_s_estimated(self) -> float:
        # the estimated safety radius coincides with the designed one
        return self.r_s_designed

    def as_dict(self) -> dict:
        return {
            "r_v_m": self.r_v,
            "r_e_m": self.r_e,
            "r_s_designed_m": self.r_s_designed,
            "r_s_practical_m": self.r_s_practical,
            "r_s_estimated_m": self.r_s_estimated,
            "r_s_rounded_m": round(self.r_s_designed, 2),
            "speed_condition_ok": self.speed_condition_ok,
        }


def radius_report(vehicle: VehicleParams, obstacle: ObstacleParams, budget: UncertaintyBudget) -> RadiusReport:
    r_v = maneuver_radius(vehicle.v_m, obstacle.v_o, vehicle.l)
    r_e = uncertainty_radius(budget, obstacle.v_o)
    r_s = designed_safety_radius(vehicle.r_m, obstacle.r_o, r_v, r_e)
    return RadiusReport(
        r_v=r_v,
        r_e=r_e,
        r_s_designed=r_s,
        r_s_practical=practical_safety_radius(vehicle.r_m, obstacle.r_o, r_v, r_e),
        speed_condition_ok=check_speed_condition(vehicle.v_m, obstacle.v_o, budget.v_b, budget.v_bo),
    )


def separation_condition_monitor(e_o, xi_dot, xi_hat_o_dot, r_s, r_o, v_b, band, slack=1e-6) -> MonitorVerdict:
    """Evaluate the boundary inequality for the estimated separation.

    Inside the shell ``| |e_o| - (r_s + r_o) | <= band`` the inequality
    ``e_o . xi_dot - e_o . xi_hat_o_dot >= (r_s + r_o) v_b`` must hold
    (up to ``slack``); elsewhere the check does not apply.
    """
    if not band > 0:
        raise ParameterError(f"band must be > 0 (got {band})")
    boundary = r_s + r_o
    if abs(float(np.linalg.norm(e_o)) - boundary) > band:
        return MonitorVerdict.NOT_APPLICABLE
    lhs = float(np.dot(e_o, xi_dot) - np.dot(e_o, xi_hat_o_dot))
    return MonitorVerdict.SATISFIED if lhs >= boundary * v_b - slack else MonitorVerdict.VIOLATED


def check_theorem1_cooperative(e_o, xi_hat_o_dot, r_s, r_o, v_m, v_b) -> bool:
    """Obstacle-side condition sufficient for safety with a certified controller."""
    return (r_s + r_o) * (v_m - v_b) >= float(np.dot(e_o, xi_hat_o_dot))

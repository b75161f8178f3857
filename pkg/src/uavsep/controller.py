"""Goal-seeking velocity command with a radial avoidance override.

Inside the guard radius the command points straight away from the
obstacle at full speed; over the next ``margin`` meters it blends linearly
into the goal-seeking command.  At the safety boundary the command is
therefore exactly ``v_m * e_o / |e_o|``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DegenerateGeometryError, ParameterError, Vec3, as_vec3
from .dynamics import saturate_command

TIE_BREAK_SCALE = 1e-3


@dataclass(frozen=True)
class ControllerParams:
    """Avoidance geometry and limits.

    Attributes:
        boundary: protected radius ``r_s + r_o`` on the estimated separation (m).
        r_guard: separation at and below which the command is fully radial (m).
        margin: width of the blend band above ``r_guard`` (m).
        v_m: command cap (m/s).
        goal: waypoint for the filtered position, or None to hold still.
        goal_gain: proportional gain of the goal-seeking term (1/s).
    """

    boundary: float
    r_guard: float
    margin: float
    v_m: float
    goal: Optional[Vec3] = None
    goal_gain: float = 1.0

    def __post_init__(self):
        if not self.margin > 0:
            raise ParameterError(f"margin must be > 0 (got {self.margin})")
        if not self.r_guard > self.boundary:
            raise ParameterError("r_guard must exceed r_s + r_o")
        if not self.v_m > 0:
            raise ParameterError(f"v_m must be > 0 (got {self.v_m})")
        if self.goal is not None:
            object.__setattr__(self, "goal", as_vec3(self.goal))

    @classmethod
    def for_radius(cls, r_s, r_o, v_m, goal=None, margin=1.0, goal_gain=1.0):
        """Guard placed one ``margin`` outside the boundary ``r_s + r_o``."""
        boundary = r_s + r_o
        return cls(boundary, boundary + margin, margin, v_m, goal, goal_gain)


def goal_command(xi_hat, params: ControllerParams) -> Vec3:
    if params.goal is None or xi_hat is None:
        return np.zeros(3)
    return saturate_command(params.goal_gain * (params.goal - np.asarray(xi_hat)), params.v_m)


def blend_weight(dist: float, params: ControllerParams) -> float:
    """0 beyond the blend band, 1 inside the guard radius, linear between."""
    w = (params.r_guard + params.margin - dist) / params.margin
    return min(max(w, 0.0), 1.0)


def _unit(e) -> tuple:
    e = np.asarray(e, dtype=np.float64)
    dist = float(np.linalg.norm(e))
    if dist == 0.0:
        raise DegenerateGeometryError("estimated positions coincide")
    return e / dist, dist


def avoid_one(t: float, e_o, params: ControllerParams, xi_hat=None) -> Vec3:
    """Command for a single obstacle at estimated offset ``e_o`` (UAV minus obstacle)."""
    direction, dist = _unit(e_o)
    alpha = blend_weight(dist, params)
    if alpha == 1.0:
        return params.v_m * direction
    cmd = alpha * params.v_m * direction + (1.0 - alpha) * goal_command(xi_hat, params)
    return saturate_command(cmd, params.v_m)


def _lateral(direction) -> Vec3:
    ref = np.array([0.0, 0.0, 1.0]) if abs(direction[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    side = np.cross(direction, ref)
    return side / np.linalg.norm(side)


def avoid_many(t: float, e_list: Sequence, params: ControllerParams, xi_hat=None) -> Vec3:
    """Command against several obstacles.

    Radial terms are weighted by each obstacle's blend weight and the sum is
    renormalized; with one active obstacle this is exactly :func:`avoid_one`.
    """
    units = [_unit(e) for e in e_list]
    weights = [blend_weight(dist, params) for _, dist in units]
    active = [k for k, w in enumerate(weights) if w > 0.0]
    if not active:
        return goal_command(xi_hat, params)
    if len(active) == 1:
        return avoid_one(t, e_list[active[0]], params, xi_hat)
    alpha = max(weights)
    radial = sum(weights[k] * units[k][0] for k in active)
    size = float(np.linalg.norm(radial))
    cmd = (1.0 - alpha) * goal_command(xi_hat, params)
    if size > 1e-9:
        cmd = cmd + alpha * params.v_m * radial / size
    else:
        nearest = min(active, key=lambda k: units[k][1])
        cmd = cmd + TIE_BREAK_SCALE * params.v_m * _lateral(units[nearest][0])
    return saturate_command(cmd, params.v_m)


def make_controller(params: ControllerParams, xi_hat=None) -> Callable:
    """Bind ``params`` and a fixed own position into a ``c(t, e_o)`` callable."""

    def c(t, e_o):
        return avoid_one(t, e_o, params, xi_hat)

    return c


def goal_only_controller(params: ControllerParams, xi_hat=None) -> Callable:
    """Goal seeking with no avoidance; fails the boundary certificate."""

    def c(t, e_o):
        return goal_command(xi_hat, params)

    return c


@dataclass(frozen=True)
class CertReport:
    certified: bool
    min_inner: float
    required: float
    n_samples: int
    worst_direction: Vec3 = field(repr=False)


def sphere_points(n: int) -> np.ndarray:
    """Quasi-uniform unit vectors on the sphere (Fibonacci lattice)."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + 5.0**0.5) * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def certify_lemma1(controller: Callable, r_s, r_o, v_m, n_samples=10_000, t=0.0, tol=1e-9) -> CertReport:
    """Sample the boundary sphere and check ``min x . c(t, x) >= (r_s + r_o) v_m``."""
    if n_samples < 1000:
        raise ParameterError("certification needs at least 1000 samples")
    radius = r_s + r_o
    points = radius * sphere_points(n_samples)
    inner = np.array([float(np.dot(x, controller(t, x))) for x in points])
    worst = int(np.argmin(inner))
    required = radius * v_m
    return CertReport(
        certified=bool(inner[worst] >= required - tol * max(1.0, required)),
        min_inner=float(inner[worst]),
        required=required,
        n_samples=n_samples,
        worst_direction=points[worst] / radius,
    )

"""Deterministic scenario execution.

One UAV flies against one or more obstacles.  The UAV controller only sees
the estimated filtered offsets ``e_o = xi_hat - xi_hat_o``; ground truth is
recorded alongside for the distance metrics and monitors.
"""

from dataclasses import dataclass, field, replace
import math
from typing import List, Optional

import numpy as np

from .. import kernels
from ..channel import CHANNEL_MODELS, EXPECTATION, ChannelState, SmoothNoise, UncertaintyBudget, lambda_bound
from ..controller import ControllerParams, avoid_many, avoid_one
from ..core import DegenerateGeometryError, ObstacleParams, ParameterError, VehicleParams, as_vec3
from ..dynamics import chasing_command, cooperative_command
from ..radius import MonitorVerdict, radius_report

BEHAVIORS = ("constant", "chasing", "cooperative")

SPEED_TOL = 1e-6
LAMBDA_FACTOR = 1.01
SHELL_SLACK = 1e-6

# monitor codes stored in Trace.shell
SHELL_NA, SHELL_OK, SHELL_VIOLATED = 0, 1, 2


class ConfigError(ValueError):
    """Invalid scenario; ``problems`` lists every offending field."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid scenario: " + "; ".join(self.problems))


@dataclass
class ObstacleSpec:
    """One obstacle, its initial state, behavior, and link parameters.

    ``tau_d`` and ``theta`` default to the budget's worst case.  ``goal`` is
    used by cooperative obstacles; ``chase_eps`` by chasing ones.
    """

    params: ObstacleParams
    p0: np.ndarray
    v0: np.ndarray
    behavior: str = "constant"
    tau_d: Optional[float] = None
    theta: Optional[float] = None
    goal: Optional[np.ndarray] = None
    chase_eps: float = 1.0

    def __post_init__(self):
        self.p0 = as_vec3(self.p0)
        self.v0 = as_vec3(self.v0)
        if self.goal is not None:
            self.goal = as_vec3(self.goal)


@dataclass
class ScenarioConfig:
    name: str
    uav: VehicleParams
    p0: np.ndarray
    obstacles: List[ObstacleSpec]
    budget: UncertaintyBudget
    v0: np.ndarray = field(default_factory=lambda: np.zeros(3))
    goal: Optional[np.ndarray] = None
    duration: float = 20.0
    dt: float = 0.01
    seed: int = 0
    r_s: Optional[float] = None
    margin: float = 1.0
    goal_gain: float = 1.0
    band: float = 0.1
    channel_model: str = EXPECTATION

    def __post_init__(self):
        self.p0 = as_vec3(self.p0)
        self.v0 = as_vec3(self.v0)
        if self.goal is not None:
            self.goal = as_vec3(self.goal)

    @property
    def r_o(self) -> float:
        return self.obstacles[0].params.r_o

    @property
    def v_o_max(self) -> float:
        return max(ob.params.v_o for ob in self.obstacles)

    def resolved_r_s(self) -> float:
        """Configured radius, or the smallest admissible one when set to auto."""
        if self.r_s is not None:
            return float(self.r_s)
        report = radius_report(self.uav, ObstacleParams(self.r_o, self.v_o_max), self.budget)
        return report.r_s_designed

    def link(self, k: int):
        ob = self.obstacles[k]
        tau = self.budget.tau_dm if ob.tau_d is None else ob.tau_d
        theta = self.budget.theta_m if ob.theta is None else ob.theta
        return tau, theta

    def problems(self) -> List[str]:
        out = []
        if not self.duration > 0:
            out.append(f"duration_s must be > 0 (got {self.duration})")
        if not self.dt > 0:
            out.append(f"dt_s must be > 0 (got {self.dt})")
        elif self.dt > self.budget.T_s * (1 + 1e-9):
            out.append(f"dt_s ({self.dt}) must not exceed T_s_s ({self.budget.T_s})")
        else:
            ratio = self.budget.T_s / self.dt
            if abs(ratio - round(ratio)) > 1e-6:
                out.append("T_s_s must be an integer multiple of dt_s")
        if not self.obstacles:
            out.append("obstacles must contain at least one entry")
        if len({ob.params.r_o for ob in self.obstacles}) > 1:
            out.append("all obstacles must share one radius r_o_m")
        if self.channel_model not in CHANNEL_MODELS:
            out.append(f"channel_model must be one of {CHANNEL_MODELS}")
        if not self.margin > 0:
            out.append(f"margin_m must be > 0 (got {self.margin})")
        if not self.band > 0:
            out.append(f"band_m must be > 0 (got {self.band})")
        if self.r_s is not None and not self.r_s > 0:
            out.append(f"r_s_m must be > 0 or auto (got {self.r_s})")
        if float(np.linalg.norm(self.v0)) > self.uav.v_m:
            out.append("initial UAV speed exceeds v_m_mps")
        for k, ob in enumerate(self.obstacles):
            if ob.behavior not in BEHAVIORS:
                out.append(f"obstacles[{k}].behavior must be one of {BEHAVIORS}")
            tau, theta = self.link(k)
            if not 0 <= tau <= self.budget.tau_dm + 1e-12:
                out.append(f"obstacles[{k}].tau_d_s must lie in [0, tau_dm_s]")
            if not 0 <= theta <= self.budget.theta_m + 1e-12:
                out.append(f"obstacles[{k}].theta must lie in [0, theta_m]")
            if ob.behavior == "constant" and float(np.linalg.norm(ob.v0)) > ob.params.v_o * (1 + 1e-12):
                out.append(f"obstacles[{k}] constant velocity exceeds v_o_mps")
            if ob.behavior == "chasing" and not ob.chase_eps > 0:
                out.append(f"obstacles[{k}].chase_eps_mps must be > 0")
            if ob.behavior == "cooperative" and not ob.params.v_o > 0:
                out.append(f"obstacles[{k}] cooperative obstacle needs v_o_mps > 0")
        return out

    def validate(self) -> "ScenarioConfig":
        problems = self.problems()
        if problems:
            raise ConfigError(problems)
        return self

    def with_overrides(self, **changes) -> "ScenarioConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass
class TraceRecord:
    """One time sample of a run; obstacle fields are lists in config order."""

    t: float
    p: np.ndarray
    v: np.ndarray
    xi: np.ndarray
    xi_hat: np.ndarray
    v_c: np.ndarray
    p_o: list
    v_o: list
    xi_o: list
    xi_bar_o: list
    xi_hat_o: list
    lambda_o: list
    dist_true: list
    dist_filtered: list
    dist_est: list
    flags: dict


@dataclass
class Trace:
    """Column-oriented run record.

    UAV arrays have shape ``(n, 3)``; per-obstacle arrays ``(n, M, 3)`` or
    ``(n, M)``.
    """

    t: np.ndarray
    p: np.ndarray
    v: np.ndarray
    xi: np.ndarray
    xi_hat: np.ndarray
    v_c: np.ndarray
    p_o: np.ndarray
    v_o: np.ndarray
    xi_o: np.ndarray
    xi_bar_o: np.ndarray
    xi_hat_o: np.ndarray
    lambda_o: np.ndarray
    dist_true: np.ndarray
    dist_filtered: np.ndarray
    dist_est: np.ndarray
    est_violation: np.ndarray
    collision: np.ndarray
    shell: np.ndarray
    lambda_ok: np.ndarray
    speed_ok: np.ndarray

    def __len__(self):
        return self.t.shape[0]

    @property
    def n_obstacles(self) -> int:
        return self.p_o.shape[1]

    @property
    def e_o(self) -> np.ndarray:
        return self.xi_hat[:, None, :] - self.xi_hat_o

    def __getitem__(self, i) -> TraceRecord:
        m = range(self.n_obstacles)
        return TraceRecord(
            t=float(self.t[i]),
            p=self.p[i],
            v=self.v[i],
            xi=self.xi[i],
            xi_hat=self.xi_hat[i],
            v_c=self.v_c[i],
            p_o=[self.p_o[i, k] for k in m],
            v_o=[self.v_o[i, k] for k in m],
            xi_o=[self.xi_o[i, k] for k in m],
            xi_bar_o=[self.xi_bar_o[i, k] for k in m],
            xi_hat_o=[self.xi_hat_o[i, k] for k in m],
            lambda_o=[self.lambda_o[i, k] for k in m],
            dist_true=[float(self.dist_true[i, k]) for k in m],
            dist_filtered=[float(self.dist_filtered[i, k]) for k in m],
            dist_est=[float(self.dist_est[i, k]) for k in m],
            flags={
                "est_violation": [bool(self.est_violation[i, k]) for k in m],
                "collision": [bool(self.collision[i, k]) for k in m],
                "shell": [int(self.shell[i, k]) for k in m],
                "lambda_ok": [bool(self.lambda_ok[i, k]) for k in m],
                "speed_ok": bool(self.speed_ok[i]),
            },
        )

    def obstacle_view(self, k: int = 0) -> "RelativeTrace":
        return RelativeTrace(
            t=self.t,
            p_tilde=self.p[:, :] - self.p_o[:, k],
            v_tilde=self.v - self.v_o[:, k],
            xi_tilde=self.xi - self.xi_o[:, k],
        )


@dataclass
class RelativeTrace:
    """UAV-minus-obstacle relative motion, as used by the separation checks."""

    t: np.ndarray
    p_tilde: np.ndarray
    v_tilde: np.ndarray
    xi_tilde: np.ndarray

    @property
    def p_tilde_dist(self) -> np.ndarray:
        return np.linalg.norm(self.p_tilde, axis=-1)

    @property
    def xi_tilde_dist(self) -> np.ndarray:
        return np.linalg.norm(self.xi_tilde, axis=-1)


@dataclass
class RunVerdict:
    scenario: str
    r_s: float
    boundary: float
    collision_distance: float
    min_true_distance: float
    min_estimated_distance: float
    min_filtered_distance: float
    min_true_per_obstacle: List[float]
    min_estimated_per_obstacle: List[float]
    min_filtered_per_obstacle: List[float]
    first_violation_time: Optional[float]
    first_collision_time: Optional[float]
    collision: bool
    monitors: dict

    @property
    def violation(self) -> bool:
        return self.first_violation_time is not None

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "r_s_m": self.r_s,
            "boundary_m": self.boundary,
            "collision_distance_m": self.collision_distance,
            "min_true_distance_m": self.min_true_distance,
            "min_estimated_distance_m": self.min_estimated_distance,
            "min_filtered_distance_m": self.min_filtered_distance,
            "min_true_per_obstacle_m": self.min_true_per_obstacle,
            "min_estimated_per_obstacle_m": self.min_estimated_per_obstacle,
            "min_filtered_per_obstacle_m": self.min_filtered_per_obstacle,
            "first_violation_time_s": self.first_violation_time,
            "first_collision_time_s": self.first_collision_time,
            "violation": self.violation,
            "collision": self.collision,
            "monitors": self.monitors,
        }


def speed_cap(config: ScenarioConfig, k: int) -> float:
    """Largest filtered-position speed obstacle ``k`` can reach.

    A chaser copies the UAV's command and adds ``chase_eps``, so its cap is
    ``v_m + chase_eps`` whatever its declared ``v_o``.
    """
    ob = config.obstacles[k]
    if ob.behavior == "chasing":
        return max(ob.params.v_o, config.uav.v_m + ob.chase_eps)
    return ob.params.v_o


def _lambda_limits(config):
    b = config.budget
    return np.array(
        [lambda_bound(speed_cap(config, k), b.tau_dm, b.theta_m, b.T_s) for k in range(len(config.obstacles))]
    )


def _first_time(t, mask):
    hits = np.flatnonzero(mask)
    return float(t[hits[0]]) if hits.size else None


def _central_rate(x, dt):
    rate = np.empty_like(x)
    rate[1:-1] = (x[2:] - x[:-2]) / (2.0 * dt)
    rate[0] = (x[1] - x[0]) / dt
    rate[-1] = (x[-1] - x[-2]) / dt
    return rate


def run_scenario(config: ScenarioConfig):
    """Simulate ``config``; returns ``(trace, verdict)``.

    Identical configs (including ``seed``) give bit-identical traces.
    """
    config.validate()
    uav = config.uav
    budget = config.budget
    l, dt = uav.l, config.dt
    M = len(config.obstacles)
    n_steps = int(round(config.duration / dt))
    tick_every = int(round(budget.T_s / dt))
    r_s = config.resolved_r_s()
    r_o = config.r_o

    params = ControllerParams.for_radius(r_s, r_o, uav.v_m, config.goal, config.margin, config.goal_gain)
    coop_params = [
        ControllerParams.for_radius(r_s, r_o, ob.params.v_o, ob.goal, config.margin, config.goal_gain)
        if ob.behavior == "cooperative"
        else None
        for ob in config.obstacles
    ]

    seeds = np.random.SeedSequence(config.seed).spawn(1 + 2 * M)
    times = np.arange(n_steps + 1) * dt
    eps = SmoothNoise(seeds[0], budget.b, budget.v_b).value(times)
    eps_o = np.stack(
        [SmoothNoise(seeds[1 + 2 * k], budget.b_o, budget.v_bo).value(times) for k in range(M)], axis=1
    )

    n = n_steps + 1
    P, V, VC = np.empty((n, 3)), np.empty((n, 3)), np.empty((n, 3))
    PO, VO = np.empty((n, M, 3)), np.empty((n, M, 3))
    XB, LAM = np.empty((n, M, 3)), np.empty((n, M, 3))

    p, v = config.p0.copy(), config.v0.copy()
    p_o = [ob.p0.copy() for ob in config.obstacles]
    v_o = [ob.v0.copy() for ob in config.obstacles]
    channels = []
    for k, ob in enumerate(config.obstacles):
        tau, theta = config.link(k)
        channels.append(
            ChannelState(
                p_o[k] + v_o[k] / l,
                tau,
                theta,
                budget.T_s,
                dt,
                rng=np.random.default_rng(seeds[2 + 2 * k]),
                model=config.channel_model,
            )
        )

    v_c = np.zeros(3)
    a_o = [ob.v0.copy() for ob in config.obstacles]
    for j in range(n):
        t = times[j]
        xi = p + v / l
        xi_hat = xi + eps[j]
        e_list = []
        for k in range(M):
            base = channels[k].estimate_state
            XB[j, k] = base
            LAM[j, k] = p_o[k] + v_o[k] / l - base
            e_list.append(xi_hat - (base + eps_o[j, k]))

        if j % tick_every == 0:
            v_c = avoid_many(t, e_list, params, xi_hat) if M > 1 else avoid_one(t, e_list[0], params, xi_hat)
            for k, ob in enumerate(config.obstacles):
                if ob.behavior == "cooperative":
                    xi_own = p_o[k] + v_o[k] / l
                    a_o[k] = cooperative_command(
                        t, e_list[k], lambda tt, x, cp=coop_params[k], me=xi_own: avoid_one(tt, x, cp, me)
                    )

        P[j], V[j], VC[j] = p, v, v_c
        for k in range(M):
            PO[j, k], VO[j, k] = p_o[k], v_o[k]
        if j == n - 1:
            break

        for k, ob in enumerate(config.obstacles):
            if ob.behavior == "chasing":
                try:
                    a_o[k] = chasing_command(xi, p_o[k] + v_o[k] / l, v_c, ob.chase_eps)
                except DegenerateGeometryError:
                    a_o[k] = v_c.copy()
        p, v = kernels.rk4_track_step(p, v, v_c, l, dt)
        tick = (j + 1) % tick_every == 0
        for k in range(M):
            p_o[k], v_o[k] = kernels.rk4_track_step(p_o[k], v_o[k], a_o[k], l, dt)
            channels[k].push(p_o[k] + v_o[k] / l)
            channels[k].advance(tick)

    XI = P + V / l
    XIH = XI + eps
    XO = PO + VO / l
    XHO = XB + eps_o
    trace = _assemble(config, r_s, times, P, V, XI, XIH, VC, PO, VO, XO, XB, XHO, LAM)
    return trace, _verdict(config, r_s, trace)


def _assemble(config, r_s, times, P, V, XI, XIH, VC, PO, VO, XO, XB, XHO, LAM):
    uav, budget = config.uav, config.budget
    r_o = config.r_o
    boundary = r_s + r_o
    dist_true = np.linalg.norm(P[:, None, :] - PO, axis=-1)
    dist_filtered = np.linalg.norm(XI[:, None, :] - XO, axis=-1)
    e_o = XIH[:, None, :] - XHO
    dist_est = np.linalg.norm(e_o, axis=-1)

    xho_rate = _central_rate(XHO, config.dt)
    lhs = np.einsum("nmi,ni->nm", e_o, VC) - np.einsum("nmi,nmi->nm", e_o, xho_rate)
    in_shell = np.abs(dist_est - boundary) <= config.band
    shell = np.where(
        in_shell, np.where(lhs >= boundary * budget.v_b - SHELL_SLACK, SHELL_OK, SHELL_VIOLATED), SHELL_NA
    ).astype(np.int8)

    lam_limit = _lambda_limits(config)
    lambda_ok = np.linalg.norm(LAM, axis=-1) <= lam_limit * LAMBDA_FACTOR + 1e-12

    return Trace(
        t=times,
        p=P,
        v=V,
        xi=XI,
        xi_hat=XIH,
        v_c=VC,
        p_o=PO,
        v_o=VO,
        xi_o=XO,
        xi_bar_o=XB,
        xi_hat_o=XHO,
        lambda_o=LAM,
        dist_true=dist_true,
        dist_filtered=dist_filtered,
        dist_est=dist_est,
        est_violation=dist_est < boundary,
        collision=dist_true < uav.r_m + r_o,
        shell=shell,
        lambda_ok=lambda_ok,
        speed_ok=np.linalg.norm(V, axis=-1) <= uav.v_m * (1 + SPEED_TOL),
    )


def _verdict(config, r_s, trace: Trace) -> RunVerdict:
    boundary = r_s + config.r_o
    collision_distance = config.uav.r_m + config.r_o
    est_any = trace.est_violation.any(axis=1)
    col_any = trace.collision.any(axis=1)
    shell_viol = (trace.shell == SHELL_VIOLATED).any(axis=1)
    lam_limit = _lambda_limits(config)
    lam_norm = np.linalg.norm(trace.lambda_o, axis=-1).max(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam_ratio = np.where(lam_limit > 0, lam_norm / lam_limit, np.where(lam_norm > 0, np.inf, 0.0))
    monitors = {
        "shell_checks": int((trace.shell != SHELL_NA).sum()),
        "shell_violations": int((trace.shell == SHELL_VIOLATED).sum()),
        "first_shell_violation_time_s": _first_time(trace.t, shell_viol),
        "max_speed_ratio": float(np.linalg.norm(trace.v, axis=-1).max() / config.uav.v_m),
        "speed_bound_ok": bool(trace.speed_ok.all()),
        "max_lambda_ratio_per_obstacle": [float(x) for x in lam_ratio],
        "lambda_bound_ok": bool(trace.lambda_ok.all()),
        "speed_condition_ok": config.uav.v_m >= config.v_o_max + config.budget.v_b + config.budget.v_bo,
    }
    min_true = trace.dist_true.min(axis=0)
    min_est = trace.dist_est.min(axis=0)
    min_filt = trace.dist_filtered.min(axis=0)
    return RunVerdict(
        scenario=config.name,
        r_s=r_s,
        boundary=boundary,
        collision_distance=collision_distance,
        min_true_distance=float(min_true.min()),
        min_estimated_distance=float(min_est.min()),
        min_filtered_distance=float(min_filt.min()),
        min_true_per_obstacle=[float(x) for x in min_true],
        min_estimated_per_obstacle=[float(x) for x in min_est],
        min_filtered_per_obstacle=[float(x) for x in min_filt],
        first_violation_time=_first_time(trace.t, est_any),
        first_collision_time=_first_time(trace.t, col_any),
        collision=bool(col_any.any()),
        monitors=monitors,
    )


def run_multi_preset(config: ScenarioConfig) -> RunVerdict:
    """Run and keep only the verdict (min-over-obstacles metrics included)."""
    return run_scenario(config)[1]


def horizon_steps(config: ScenarioConfig) -> int:
    return int(math.floor(config.duration / config.dt + 0.5))

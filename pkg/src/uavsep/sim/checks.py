"""Executable forms of the separation lemmas and propositions.

Each check integrates or replays a trajectory and asserts the stated
bound with an explicit multiplicative tolerance.
"""

from dataclasses import dataclass
import math
from typing import Optional

import numpy as np

from .. import kernels
from ..channel import SAMPLE_HOLD, EXPECTATION, ChannelState, SmoothNoise, lag_gain, lambda_bound
from ..core import ParameterError
from ..radius import proposition2_threshold

KS_MIN_SAMPLES = 30
BOUND_TOL = 1e-6
PREMISE_TOL = 1e-9


class InsufficientDataError(ValueError):
    """Too few or degenerate samples for a statistic."""


def ks_statistic(samples) -> float:
    """One-sample KS distance to a normal fitted by sample mean and variance."""
    x = np.asarray(samples, dtype=np.float64).reshape(-1)
    if x.size < KS_MIN_SAMPLES:
        raise InsufficientDataError(f"KS needs at least {KS_MIN_SAMPLES} samples (got {x.size})")
    sd = x.std(ddof=1)
    if not sd > 0:
        raise InsufficientDataError("samples have zero variance")
    z = np.sort((x - x.mean()) / sd)
    return float(kernels.ks_normal_sorted(z))


def ks_critical(n: int, c: float = 1.36) -> float:
    """Large-sample 5% critical value ``c / sqrt(n)``."""
    return c / math.sqrt(n)


# --- proposition 2 ---------------------------------------------------------


@dataclass
class Prop2Report:
    holds: bool
    threshold: float
    premise_samples: int
    min_true_distance: float
    min_true_under_premise: float
    premise_broken_at: Optional[float]


def proposition2_report(rel, r: float, r_v: float) -> Prop2Report:
    """Replay a relative trajectory against the filtered-separation implication.

    ``rel`` needs ``t``, ``p_tilde`` and ``xi_tilde`` arrays (a
    :class:`RelativeTrace`, or a full trace for its first obstacle).
    """
    if hasattr(rel, "obstacle_view"):
        if rel.n_obstacles != 1:
            raise ParameterError("proposition 2 replay needs a single-obstacle trace")
        rel = rel.obstacle_view(0)
    thr = proposition2_threshold(r, r_v)
    p_dist = np.linalg.norm(rel.p_tilde, axis=-1)
    xi_dist = np.linalg.norm(rel.xi_tilde, axis=-1)
    ok_filtered = xi_dist >= thr * (1.0 - PREMISE_TOL)
    # premise must hold from the start onward, so keep the leading run only
    held = np.logical_and.accumulate(ok_filtered)
    if not p_dist[0] >= r * (1.0 - PREMISE_TOL):
        held[:] = False
    broken = np.flatnonzero(~held)
    under = p_dist[held]
    min_under = float(under.min()) if under.size else math.inf
    return Prop2Report(
        holds=bool(min_under >= r * (1.0 - BOUND_TOL)),
        threshold=thr,
        premise_samples=int(held.sum()),
        min_true_distance=float(p_dist.min()),
        min_true_under_premise=min_under,
        premise_broken_at=float(rel.t[broken[0]]) if broken.size else None,
    )


def verify_proposition2(trace, r: float, r_v: float) -> bool:
    """True iff the true separation stays above ``r`` wherever the premise held."""
    return proposition2_report(trace, r, r_v).holds


@dataclass
class RelativeRun:
    t: np.ndarray
    p_tilde: np.ndarray
    v_tilde: np.ndarray
    xi_tilde: np.ndarray


def _orbit(p0, v0, l, omega, duration, dt) -> RelativeRun:
    # the held relative command moves the filtered offset along the chord to
    # its exact rotation about z, so |xi~| is preserved sample to sample
    n = int(round(duration / dt))
    ps = np.empty((n + 1, 3))
    vs = np.empty((n + 1, 3))
    ps[0], vs[0] = p0, v0
    p, v = np.array(p0, dtype=np.float64), np.array(v0, dtype=np.float64)
    c, s = math.cos(omega * dt), math.sin(omega * dt)
    for j in range(n):
        xi = p + v / l
        turned = np.array([c * xi[0] - s * xi[1], s * xi[0] + c * xi[1], xi[2]])
        p, v = kernels.rk4_track_step(p, v, (turned - xi) / dt, l, dt)
        ps[j + 1], vs[j + 1] = p, v
    return RelativeRun(np.arange(n + 1) * dt, ps, vs, ps + vs / l)


def equality_construction(r: float, r_v: float, l: float, duration=10.0, dt=1e-3) -> RelativeRun:
    """Relative orbit that sits exactly on the filtered threshold.

    The true offset circles at radius ``r`` with relative speed ``l r_v``
    perpendicular to it, so the velocity term is as large as allowed and
    the filtered separation equals ``sqrt(r^2 + r_v^2)`` throughout.
    """
    omega = l * r_v / r
    return _orbit([r, 0.0, 0.0], [0.0, l * r_v, 0.0], l, omega, duration, dt)


def necessity_construction(r: float, r_v: float, l: float, eps_o: float, duration=10.0, dt=1e-3) -> RelativeRun:
    """Start at true separation ``r`` with filtered separation squared ``r^2 + r_v^2 - eps_o``.

    The relative speed stays at ``l r_v``; a small inward component makes
    the true separation shrink below ``r``.
    """
    if not 0 < eps_o < min(r * r, 4 * r * r_v):
        raise ParameterError("eps_o must lie in (0, min(r^2, 4 r r_v))")
    a = -eps_o / (2.0 * r)
    b = math.sqrt(r_v * r_v - a * a)
    omega = l * r_v / r
    return _orbit([r, 0.0, 0.0], [l * a, l * b, 0.0], l, omega, duration, dt)


# --- lemma 2 ---------------------------------------------------------------


@dataclass
class Lemma2Report:
    holds: bool
    norm_ok: bool
    rate_checked: bool
    rate_ok: bool
    max_norm_ratio: float
    max_rate_ratio: float


def lemma2_report(k, y, x0, dt, k_min=None, k_max=None, y_max=None, v_ymax=None) -> Lemma2Report:
    """Integrate ``x' = -k(t) (x - y(t))`` and test both norm bounds.

    ``k`` has shape (n,), ``y`` shape (n, d), sampled every ``dt``.  Bounds
    default to the profile's own extremes (rate by finite differences).
    """
    k = np.asarray(k, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    x0 = np.asarray(x0, dtype=np.float64).reshape(y.shape[1])
    if k.shape[0] != y.shape[0] or k.shape[0] < 2:
        raise ParameterError("k and y need the same number (>= 2) of samples")
    y_norm = np.linalg.norm(y, axis=1)
    y_rate = np.linalg.norm(np.diff(y, axis=0), axis=1) / dt
    k_min = float(k.min()) if k_min is None else k_min
    k_max = float(k.max()) if k_max is None else k_max
    y_max = float(y_norm.max()) if y_max is None else y_max
    v_ymax = float(y_rate.max()) if v_ymax is None else v_ymax

    slack = 1e-12
    if not 0 < k_min <= k_max:
        raise ParameterError("need 0 < k_min <= k_max")
    if k.min() < k_min - slack or k.max() > k_max + slack:
        raise ParameterError("k profile leaves [k_min, k_max]")
    if y_norm.max() > y_max * (1 + 1e-12) + slack:
        raise ParameterError("y profile exceeds y_max")
    if y_rate.max() > v_ymax * (1 + 1e-9) + slack:
        raise ParameterError("y profile rate exceeds v_ymax")
    if np.linalg.norm(x0) > y_max * (1 + 1e-12) + slack:
        raise ParameterError("|x(0)| exceeds y_max")

    x = kernels.lemma2_integrate(k, y, x0, dt)
    x_norm = np.linalg.norm(x, axis=1)
    ratio = float(x_norm.max() / y_max) if y_max > 0 else (0.0 if x_norm.max() == 0 else math.inf)
    norm_ok = ratio <= 1 + BOUND_TOL

    rate_checked = bool(np.linalg.norm(x0 - y[0]) <= v_ymax / k_min * (1 + 1e-12))
    rate_ratio = 0.0
    rate_ok = True
    if rate_checked:
        x_dot = np.linalg.norm(-k[:, None] * (x - y), axis=1)
        limit = k_max / k_min * v_ymax
        if limit > 0:
            rate_ratio = float(x_dot.max() / limit)
        elif x_dot.max() > 0:
            rate_ratio = math.inf
        rate_ok = rate_ratio <= 1 + BOUND_TOL
    return Lemma2Report(norm_ok and rate_ok, norm_ok, rate_checked, rate_ok, ratio, rate_ratio)


def verify_lemma2(k_profile, y_profile, x0, dt=1e-3, **bounds) -> bool:
    """True iff both Lemma 2 bounds hold along the integrated trajectory."""
    return lemma2_report(k_profile, y_profile, x0, dt, **bounds).holds


def random_lemma2_case(rng, duration=5.0, dt=1e-3, dim=3):
    """Draw an admissible (k, y, x0, bounds) tuple.

    ``k`` is piecewise linear between random knots in ``[k_min, k_max]``;
    ``y`` is seeded smooth noise with certified amplitude and rate bounds.
    Half of the cases start close enough to ``y`` for the rate bound to apply.
    """
    n = int(round(duration / dt)) + 1
    t = np.arange(n) * dt
    k_min = rng.uniform(0.5, 5.0)
    k_max = k_min * rng.uniform(1.0, 10.0)
    knots = np.sort(rng.uniform(0.0, duration, size=rng.integers(2, 8)))
    knot_t = np.concatenate([[0.0], knots, [duration]])
    knot_k = rng.uniform(k_min, k_max, size=knot_t.size)
    k = np.interp(t, knot_t, knot_k)
    y_max = rng.uniform(0.1, 10.0)
    v_ymax = rng.uniform(0.1, 5.0)
    noise = SmoothNoise(int(rng.integers(2**32)), y_max, v_ymax)
    y = noise.value(t)[:, :dim]
    if rng.random() < 0.5:
        offset = rng.normal(size=dim)
        offset *= rng.uniform(0, 1) * (v_ymax / k_min) / np.linalg.norm(offset)
        x0 = y[0] + offset
        if np.linalg.norm(x0) > y_max:
            x0 = x0 * (y_max / np.linalg.norm(x0))
            if np.linalg.norm(x0 - y[0]) > v_ymax / k_min:
                x0 = y[0].copy()
    else:
        direction = rng.normal(size=dim)
        x0 = direction / np.linalg.norm(direction) * y_max * rng.uniform(0, 1)
    bounds = {"k_min": k_min, "k_max": k_max, "y_max": y_max, "v_ymax": v_ymax}
    return k, y, x0, bounds


def lemma2_sweep(n_cases=100, seed=0, dt=1e-3, duration=5.0):
    """Run ``n_cases`` random admissible profiles; returns the reports."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_cases):
        k, y, x0, bounds = random_lemma2_case(rng, duration, dt)
        out.append(lemma2_report(k, y, x0, dt, **bounds))
    return out


# --- proposition 3 ---------------------------------------------------------


def random_obstacle_path(rng, v_o, duration, dt):
    """Filtered obstacle path with speed at most ``v_o``; shape (n + 1, 3)."""
    n = int(round(duration / dt))
    t = np.arange(n + 1) * dt
    # velocity is smooth noise bounded by v_o, integrated exactly
    noise = SmoothNoise(int(rng.integers(2**32)), v_o, rng.uniform(0.1, 2.0) * max(v_o, 1e-9))
    amp, om, ph = noise.amp, noise.omega, noise.phase
    safe = np.where(om > 0, om, 1.0)
    pos = np.where(
        om > 0,
        amp * (np.cos(ph) - np.cos(om * t[:, None, None] + ph)) / safe,
        amp * np.sin(ph) * t[:, None, None],
    ).sum(axis=-1)
    return t, rng.uniform(-50, 50, size=3) + pos


def lambda_trial(rng, v_o, tau_dm, theta_m, T_s, duration=20.0, dt=0.01):
    """Max ``|lambda_o| / bound`` for one random path and link draw."""
    t, path = random_obstacle_path(rng, v_o, duration, dt)
    tau = rng.uniform(0.0, tau_dm)
    theta = rng.uniform(0.0, theta_m)
    ch = ChannelState(path[0], tau, theta, T_s, dt, model=EXPECTATION)
    worst = 0.0
    for j in range(1, t.size):
        ch.push(path[j])
        ch.advance(True)
        worst = max(worst, float(np.linalg.norm(path[j] - ch.xi_bar)))
    bound = lambda_bound(v_o, tau_dm, theta_m, T_s)
    return worst / bound if bound > 0 else (0.0 if worst == 0 else math.inf)


def lambda_sweep(n_cases=100, seed=0, v_o=5.0, tau_dm=1.0, theta_m=0.1, T_s=0.01, duration=10.0, dt=0.01):
    rng = np.random.default_rng(seed)
    return [lambda_trial(rng, v_o, tau_dm, theta_m, T_s, duration, dt) for _ in range(n_cases)]


# --- channel model consistency --------------------------------------------


@dataclass
class ChannelConsistency:
    n: int
    ks: float
    ks_critical: float
    ks_pass: bool
    max_residual: float
    residual_bound: float
    bounded: bool
    longest_loss_run: int


def channel_consistency(seed=0, n=10_000, v_o=5.0, tau_d=1.0, theta=0.1, T_s=0.01, stride=10) -> ChannelConsistency:
    """Compare the sample-hold receiver with the expectation model.

    Both run on the same random obstacle path at ``dt = T_s``; the residual
    ``held - xi_bar`` is sampled on one axis every ``stride`` ticks.  The
    deterministic bound is ``v_o (T_s (L + 1) + 1 / k)`` with ``L`` the
    longest observed loss run.
    """
    rng = np.random.default_rng(seed)
    dt = T_s
    steps = n * stride
    t, path = random_obstacle_path(rng, v_o, steps * dt, dt)
    link_rng = np.random.default_rng(rng.integers(2**32))
    hold = ChannelState(path[0], tau_d, theta, T_s, dt, rng=link_rng, model=SAMPLE_HOLD)
    mean = ChannelState(path[0], tau_d, theta, T_s, dt, model=EXPECTATION)
    res = np.empty(n)
    worst = 0.0
    run = longest = 0
    for j in range(1, steps + 1):
        before = hold.held_estimate
        hold.push(path[j])
        mean.push(path[j])
        hold.advance(True)
        mean.advance(True)
        lost = hold.held_estimate is before
        run = run + 1 if lost else 0
        longest = max(longest, run)
        diff = hold.held_estimate - mean.xi_bar
        worst = max(worst, float(np.abs(diff).max()))
        if j % stride == 0:
            res[j // stride - 1] = diff[0]
    bound = v_o * (T_s * (longest + 1) + 1.0 / lag_gain(theta, T_s))
    ks = ks_statistic(res)
    crit = ks_critical(n)
    return ChannelConsistency(n, ks, crit, ks < crit, worst, bound, worst <= bound * (1 + 1e-9), longest)

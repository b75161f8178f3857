"""Broadcast link model: delay, packet loss, and bounded estimation noise.

Two receive models share one :class:`ChannelState`:

* ``sample_hold`` keeps the last delivered delayed sample and drops each
  packet independently with probability ``theta`` on the ``T_s`` grid;
* ``expectation`` integrates the first-order lag
  ``xi_bar' = k (xi_o(t - tau_d) - xi_bar)`` with ``k = (1 - theta) / (theta T_s)``,
  the mean behaviour of the sample-hold receiver.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from . import kernels
from .core import ParameterError, Vec3

EXPECTATION = "expectation"
SAMPLE_HOLD = "sample_hold"
CHANNEL_MODELS = (EXPECTATION, SAMPLE_HOLD)


@dataclass(frozen=True)
class UncertaintyBudget:
    """Noise, delay and loss bounds for one UAV and its broadcast links.

    Attributes:
        b: bound on the UAV's own filtered-position estimate error (m).
        v_b: bound on that error's rate (m/s).
        b_o: bound on the obstacle estimate error (m).
        v_bo: bound on that error's rate (m/s).
        tau_dm: largest admissible broadcast delay (s).
        theta_m: largest packet-loss probability, strictly below 1.
        T_s: receive interval (s).
    """

    b: float = 0.0
    v_b: float = 0.0
    b_o: float = 0.0
    v_bo: float = 0.0
    tau_dm: float = 0.0
    theta_m: float = 0.0
    T_s: float = 0.01

    def __post_init__(self):
        for name in ("b", "v_b", "b_o", "v_bo", "tau_dm"):
            value = getattr(self, name)
            if not value >= 0:
                raise ParameterError(f"{name} must be >= 0 (got {value})")
        if not 0 <= self.theta_m < 1:
            raise ParameterError(f"theta_m must lie in [0, 1) (got {self.theta_m})")
        if not self.T_s > 0:
            raise ParameterError(f"T_s must be > 0 (got {self.T_s})")


def lag_gain(theta: float, T_s: float) -> float:
    """Gain ``(1 - theta) / (theta T_s)`` of the expectation model."""
    if not 0 < theta < 1:
        raise ParameterError(f"lag gain needs 0 < theta < 1 (got {theta})")
    return (1.0 - theta) / (theta * T_s)


class DelayBuffer:
    """Ring of filtered-position samples on a uniform time grid.

    Samples are pushed every ``dt`` seconds starting at ``t0``.  Lookups
    before ``t0`` return the first sample, so the history before the run is
    taken as constant.
    """

    def __init__(self, initial, dt: float, horizon: float, t0: float = 0.0):
        if not dt > 0:
            raise ParameterError(f"dt must be > 0 (got {dt})")
        self.dt = float(dt)
        self.t0 = float(t0)
        self.capacity = int(math.ceil(max(horizon, 0.0) / dt)) + 3
        self._data = np.empty((self.capacity, 3))
        self._initial = np.array(initial, dtype=np.float64)
        self._data[0] = self._initial
        self._count = 1

    @property
    def latest_time(self) -> float:
        return self.t0 + (self._count - 1) * self.dt

    @property
    def latest(self) -> Vec3:
        return self._data[(self._count - 1) % self.capacity]

    def push(self, sample) -> None:
        self._data[self._count % self.capacity] = sample
        self._count += 1

    def _at(self, j: int) -> Vec3:
        if j < self._count - self.capacity:
            raise ParameterError("delay exceeds buffer horizon")
        return self._data[j % self.capacity]

    def sample(self, t: float) -> Vec3:
        """Value at time ``t``, linearly interpolated between grid samples."""
        x = (t - self.t0) / self.dt
        if x <= 0.0:
            return self._initial.copy()
        last = self._count - 1
        if x > last + 1e-9:
            raise ParameterError(f"time {t} is ahead of the newest sample {self.latest_time}")
        j = int(math.floor(x + 1e-9))
        frac = x - j
        if j >= last or frac < 1e-9:
            return self._at(min(j, last)).copy()
        a = self._at(j)
        b = self._at(j + 1)
        return a + frac * (b - a)


def delayed_sample(buffer: DelayBuffer, t: float, tau_d: float) -> Vec3:
    """Return ``xi_o(t - tau_d)`` from ``buffer``."""
    if tau_d < 0:
        raise ParameterError(f"tau_d must be >= 0 (got {tau_d})")
    return buffer.sample(t - tau_d)


class SmoothNoise:
    """Deterministic smooth noise with certified amplitude and rate bounds.

    Each axis is a sum of three sinusoids whose amplitudes add up to
    ``bound / sqrt(3)`` and whose amplitude-weighted frequencies add up to
    ``rate_bound / sqrt(3)``, so ``|eps| <= bound`` and ``|eps'| <= rate_bound``
    hold for every ``t``.  Weights, frequencies and phases come from ``seed``.
    """

    n_terms = 3

    def __init__(self, seed, bound: float, rate_bound: float):
        if bound < 0 or rate_bound < 0:
            raise ParameterError("noise bounds must be >= 0")
        self.bound = float(bound)
        self.rate_bound = float(rate_bound)
        rng = np.random.default_rng(seed)
        weights = rng.dirichlet(np.ones(self.n_terms), size=3)
        spread = rng.uniform(0.5, 1.5, size=(3, self.n_terms))
        self.phase = rng.uniform(0.0, 2.0 * np.pi, size=(3, self.n_terms))
        self.amp = weights * (self.bound / math.sqrt(3.0))
        self.omega = np.zeros((3, self.n_terms))
        if self.bound > 0:
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                scale = (self.rate_bound / math.sqrt(3.0)) / (self.amp * spread).sum(axis=1)
                omega = spread * scale[:, None]
            if np.isfinite(omega).all():
                self.omega = omega
            else:
                # amplitude too small to carry the requested rate: treat as silent
                self.amp = np.zeros_like(self.amp)

    def value(self, t):
        t = np.asarray(t, dtype=np.float64)
        arg = self.omega * t[..., None, None] + self.phase
        return (self.amp * np.sin(arg)).sum(axis=-1)

    def rate(self, t):
        t = np.asarray(t, dtype=np.float64)
        arg = self.omega * t[..., None, None] + self.phase
        return (self.amp * self.omega * np.cos(arg)).sum(axis=-1)

    __call__ = value


@lru_cache(maxsize=64)
def _noise(seed, bound, rate_bound):
    return SmoothNoise(seed, bound, rate_bound)


def bounded_noise(t, seed, bound: float, rate_bound: float):
    """Evaluate the seeded smooth noise signal at ``t`` (scalar or array)."""
    return _noise(seed, float(bound), float(rate_bound)).value(t)


def expectation_ode_step(xi_bar, u_start, theta: float, T_s: float, dt: float, u_mid=None, u_end=None) -> Vec3:
    """Advance the expectation model exactly over one step of length ``dt``.

    ``u_start``, ``u_mid`` and ``u_end`` are the delayed obstacle samples at
    the start, midpoint and end of the step, joined linearly; missing values
    are taken equal to ``u_start``.  With ``theta == 0`` nothing is lost and
    the state is the delayed sample itself.
    """
    if not dt > 0:
        raise ParameterError(f"dt must be > 0 (got {dt})")
    u_start = np.asarray(u_start, dtype=np.float64)
    u_mid = u_start if u_mid is None else np.asarray(u_mid, dtype=np.float64)
    u_end = u_start if u_end is None else np.asarray(u_end, dtype=np.float64)
    if theta == 0:
        return u_end.copy()
    k = lag_gain(theta, T_s)
    return kernels.lag_step(np.asarray(xi_bar, dtype=np.float64), u_start, u_mid, u_end, k, dt)


class ChannelState:
    """State of one broadcast link as seen by the receiving UAV.

    Args:
        xi_o0: obstacle filtered position at ``t0``.
        tau_d: delay of this link (s).
        theta: packet-loss probability of this link.
        T_s: receive interval (s).
        dt: integration step (s), at most ``T_s``.
        rng: ``numpy.random.Generator`` used for loss draws.
        model: ``"expectation"`` or ``"sample_hold"``.
    """

    def __init__(self, xi_o0, tau_d, theta, T_s, dt, rng=None, model=EXPECTATION, t0=0.0):
        if model not in CHANNEL_MODELS:
            raise ParameterError(f"unknown channel model {model!r}")
        if not 0 <= theta <= 1:
            raise ParameterError(f"theta must lie in [0, 1] (got {theta})")
        if tau_d < 0:
            raise ParameterError(f"tau_d must be >= 0 (got {tau_d})")
        self.tau_d = float(tau_d)
        self.theta = float(theta)
        self.T_s = float(T_s)
        self.dt = float(dt)
        self.model = model
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.delay_buffer = DelayBuffer(xi_o0, dt, horizon=tau_d + dt, t0=t0)
        start = delayed_sample(self.delay_buffer, t0, self.tau_d)
        self.xi_bar = start.copy()
        self.held_estimate = start.copy()
        self.t = float(t0)

    @property
    def estimate_state(self) -> Vec3:
        """Noise-free received value under the active model."""
        return self.xi_bar if self.model == EXPECTATION else self.held_estimate

    def push(self, xi_o) -> None:
        """Record the obstacle's filtered position at ``t + dt``."""
        self.delay_buffer.push(xi_o)

    def advance(self, tick: bool) -> None:
        """Move the receiver from ``t`` to ``t + dt``.

        The sample at ``t + dt`` must have been pushed.  ``tick`` marks a
        receive instant on the ``T_s`` grid, where a loss draw happens.
        """
        t0, t1 = self.t, self.t + self.dt
        if self.model == EXPECTATION:
            self.xi_bar = expectation_ode_step(
                self.xi_bar,
                delayed_sample(self.delay_buffer, t0, self.tau_d),
                self.theta,
                self.T_s,
                self.dt,
                u_mid=delayed_sample(self.delay_buffer, t0 + 0.5 * self.dt, self.tau_d),
                u_end=delayed_sample(self.delay_buffer, t1, self.tau_d),
            )
        elif tick:
            sample_hold_estimate(self, delayed_sample(self.delay_buffer, t1, self.tau_d), self.theta)
        self.t = t1


def sample_hold_estimate(state: ChannelState, xi_o_delayed, theta: float) -> Vec3:
    """One receive instant: drop with probability ``theta``, else deliver.

    Returns the held value after the draw.
    """
    if not 0 <= theta <= 1:
        raise ParameterError(f"theta must lie in [0, 1] (got {theta})")
    lost = state.rng.random() < theta
    if not lost:
        state.held_estimate = np.array(xi_o_delayed, dtype=np.float64)
    return state.held_estimate


def estimate_link(state: ChannelState, truth_xi_o, noise_o) -> tuple:
    """Received estimate and lag diagnostic for one link.

    Returns ``(xi_hat_o, lambda_o)`` where ``xi_hat_o`` is the model state
    plus the estimate noise and ``lambda_o = xi_o - xi_bar_o``.
    """
    base = state.estimate_state
    return base + noise_o, np.asarray(truth_xi_o, dtype=np.float64) - base


def lambda_bound(v_o: float, tau_dm: float, theta_m: float, T_s: float) -> float:
    """Worst-case ``|xi_o - xi_bar_o|`` under the delay and loss bounds."""
    if not 0 <= theta_m < 1:
        raise ParameterError(f"theta_m must lie in [0, 1) (got {theta_m})")
    return v_o * tau_dm + theta_m * T_s * v_o / (1.0 - theta_m)

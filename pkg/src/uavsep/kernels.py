"""Hot inner loops: fixed-step integrators, filters, and the KS statistic.

Every kernel takes and returns float64 arrays and is written so that the
same source runs under numba and as plain Python.  See ``_accel`` for the
backend switch.
"""

import math

import numpy as np

from ._accel import BACKEND, jit

__all__ = [
    "BACKEND",
    "rk4_track_step",
    "integrate_track",
    "lag_step",
    "lag_filter",
    "sample_hold",
    "lemma2_integrate",
    "ks_normal_sorted",
]


@jit
def rk4_track_step(p, v, vc, l, dt):
    """One RK4 step of p' = v, v' = -l (v - vc) with vc held over the step."""
    p_out = np.empty(3)
    v_out = np.empty(3)
    h2 = 0.5 * dt
    for i in range(3):
        k1p = v[i]
        k1v = -l * (v[i] - vc[i])
        k2p = v[i] + h2 * k1v
        k2v = -l * (k2p - vc[i])
        k3p = v[i] + h2 * k2v
        k3v = -l * (k3p - vc[i])
        k4p = v[i] + dt * k3v
        k4v = -l * (k4p - vc[i])
        p_out[i] = p[i] + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        v_out[i] = v[i] + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return p_out, v_out


@jit
def integrate_track(p0, v0, commands, l, dt):
    """Integrate the tracking model over a sequence of held commands.

    Returns position and velocity arrays of shape (n + 1, 3).
    """
    n = commands.shape[0]
    ps = np.empty((n + 1, 3))
    vs = np.empty((n + 1, 3))
    ps[0] = p0
    vs[0] = v0
    for j in range(n):
        p, v = rk4_track_step(ps[j], vs[j], commands[j], l, dt)
        ps[j + 1] = p
        vs[j + 1] = v
    return ps, vs


@jit
def _lag_linear(x, u0, u1, k, h):
    # exact flow of x' = k (u - x) over h with u linear from u0 to u1
    kh = k * h
    e = math.exp(-kh)
    c = -math.expm1(-kh) / kh
    return u1 + (x - u0) * e - (u1 - u0) * c


@jit
def lag_step(x, u0, um, u1, k, dt):
    """Exact step of x' = k (u - x) for u piecewise linear through u0, um, u1.

    Stable for any ``k dt``; the gain can reach several hundred per second.
    """
    h = 0.5 * dt
    return _lag_linear(_lag_linear(x, u0, um, k, h), um, u1, k, h)


@jit
def lag_filter(u, k, dt, x0):
    """First-order lag over grid samples ``u`` (n + 1, d).

    The input is taken as piecewise linear between samples.
    """
    n = u.shape[0]
    out = np.empty_like(u)
    out[0] = x0
    for j in range(n - 1):
        um = 0.5 * (u[j] + u[j + 1])
        out[j + 1] = lag_step(out[j], u[j], um, u[j + 1], k, dt)
    return out


@jit
def sample_hold(u, lost, x0):
    """Receive ``u[j]`` unless ``lost[j]``, in which case repeat the last value."""
    n = u.shape[0]
    out = np.empty_like(u)
    last = x0.copy()
    for j in range(n):
        if not lost[j]:
            last = u[j].copy()
        out[j] = last
    return out


@jit
def lemma2_integrate(k, y, x0, dt):
    """RK4 for x' = -k(t) (x - y(t)) with k, y sampled on a uniform grid."""
    n = k.shape[0]
    out = np.empty_like(y)
    out[0] = x0
    h2 = 0.5 * dt
    for j in range(n - 1):
        x = out[j]
        km = 0.5 * (k[j] + k[j + 1])
        ym = 0.5 * (y[j] + y[j + 1])
        d1 = -k[j] * (x - y[j])
        d2 = -km * (x + h2 * d1 - ym)
        d3 = -km * (x + h2 * d2 - ym)
        d4 = -k[j + 1] * (x + dt * d3 - y[j + 1])
        out[j + 1] = x + dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4)
    return out


@jit
def ks_normal_sorted(z):
    """Two-sided KS distance between sorted standardized samples and N(0, 1)."""
    n = z.shape[0]
    d = 0.0
    for i in range(n):
        cdf = 0.5 * (1.0 + math.erf(z[i] / math.sqrt(2.0)))
        hi = (i + 1) / n - cdf
        lo = cdf - i / n
        if hi > d:
            d = hi
        if lo > d:
            d = lo
    return d

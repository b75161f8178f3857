"""Time stepping for the UAV tracking model and the obstacle command laws."""

import numpy as np

from . import kernels
from .core import DegenerateGeometryError, KinematicState, ParameterError, Vec3

# Both models share the same (p, v) state; the aliases keep call sites readable.
UavState = KinematicState
ObstacleState = KinematicState

DEFAULT_DT = 0.01


def saturate_command(v_c, v_m: float) -> Vec3:
    """Scale ``v_c`` back onto the ball of radius ``v_m``, keeping its direction."""
    v_c = np.asarray(v_c, dtype=np.float64)
    speed = float(np.linalg.norm(v_c))
    if speed <= v_m:
        return v_c.copy()
    return v_c * (v_m / speed)


def _check_step(l, dt):
    if not dt > 0:
        raise ParameterError(f"dt must be > 0 (got {dt})")
    if not l > 0:
        raise ParameterError(f"maneuver constant l must be > 0 (got {l})")


def step_uav(s: UavState, v_c, l: float, dt: float = DEFAULT_DT) -> UavState:
    """Advance ``p' = v, v' = -l (v - v_c)`` by one RK4 step.

    ``v_c`` must already be saturated; it is held constant over the step.
    """
    _check_step(l, dt)
    p, v = kernels.rk4_track_step(s.p, s.v, np.asarray(v_c, dtype=np.float64), l, dt)
    return UavState(p, v)


def step_obstacle(s: ObstacleState, a_o, l: float, dt: float = DEFAULT_DT) -> ObstacleState:
    """Advance the obstacle model, whose filtered position moves at ``a_o``.

    With ``s.v == a_o`` the obstacle keeps a constant velocity.
    """
    _check_step(l, dt)
    p, v = kernels.rk4_track_step(s.p, s.v, np.asarray(a_o, dtype=np.float64), l, dt)
    return ObstacleState(p, v)


def chasing_command(xi, xi_o, xi_dot, eps: float) -> Vec3:
    """Pursuit law for an adversarial obstacle.

    The obstacle copies the UAV's filtered velocity ``xi_dot`` and adds a
    closing component of speed ``eps``, so the filtered separation shrinks
    at exactly ``eps`` m/s whatever the UAV does.
    """
    if not eps > 0:
        raise ParameterError(f"eps must be > 0 (got {eps})")
    gap = np.asarray(xi_o, dtype=np.float64) - np.asarray(xi, dtype=np.float64)
    dist = float(np.linalg.norm(gap))
    if dist == 0.0:
        raise DegenerateGeometryError("chasing direction undefined: filtered positions coincide")
    return np.asarray(xi_dot, dtype=np.float64) - eps * gap / dist


def cooperative_command(t: float, e_o_mirror, controller) -> Vec3:
    """Command of a cooperative obstacle running ``controller`` on mirrored feedback.

    ``e_o_mirror`` is the UAV's feedback ``e_o``; the obstacle sees ``-e_o``.
    """
    return controller(t, -np.asarray(e_o_mirror, dtype=np.float64))

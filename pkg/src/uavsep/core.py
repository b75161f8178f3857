"""Value types, vector helpers, and the filtered-position transform.

Vectors are plain ``numpy`` float64 arrays of shape ``(3,)``; positions are
in meters and velocities in meters per second.
"""

from dataclasses import dataclass

import numpy as np

Vec3 = np.ndarray


class ParameterError(ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class DegenerateGeometryError(ValueError):
    """A direction is requested between coincident points."""


def vec3(x=0.0, y=0.0, z=0.0) -> Vec3:
    return np.array([x, y, z], dtype=np.float64)


def as_vec3(a) -> Vec3:
    out = np.asarray(a, dtype=np.float64).reshape(-1)
    if out.shape != (3,):
        raise ParameterError(f"expected 3 components, got {out.shape[0]}")
    return out


def norm(a) -> float:
    return float(np.linalg.norm(a))


def _require_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise ParameterError(f"{name} must be > 0 (got {value})")


@dataclass(frozen=True)
class VehicleParams:
    """Physical radius ``r_m`` (m), maneuver constant ``l`` (1/s), command cap ``v_m`` (m/s)."""

    r_m: float
    l: float
    v_m: float

    def __post_init__(self):
        _require_positive(r_m=self.r_m, l=self.l, v_m=self.v_m)


@dataclass(frozen=True)
class ObstacleParams:
    """Obstacle radius ``r_o`` (m) and bound ``v_o`` on its filtered-position speed (m/s)."""

    r_o: float
    v_o: float

    def __post_init__(self):
        _require_positive(r_o=self.r_o)
        if not self.v_o >= 0:
            raise ParameterError(f"v_o must be >= 0 (got {self.v_o})")


@dataclass(frozen=True)
class KinematicState:
    """Center-of-mass position ``p`` and velocity ``v`` of a vehicle or obstacle."""

    p: Vec3
    v: Vec3

    def __post_init__(self):
        object.__setattr__(self, "p", as_vec3(self.p))
        object.__setattr__(self, "v", as_vec3(self.v))

    def filtered(self, l: float) -> Vec3:
        return filtered_position(self.p, self.v, l)


def filtered_position(p, v, l: float) -> Vec3:
    """Return ``p + v / l``, the position the vehicle settles toward."""
    if not l > 0:
        raise ParameterError(f"maneuver constant l must be > 0 (got {l})")
    return np.asarray(p, dtype=np.float64) + np.asarray(v, dtype=np.float64) / l


def position_error_triplet(uav_state, obstacle_state, l: float):
    """Relative position, velocity and filtered position (UAV minus obstacle)."""
    p_err = uav_state.p - obstacle_state.p
    v_err = uav_state.v - obstacle_state.v
    return p_err, v_err, filtered_position(p_err, v_err, l)

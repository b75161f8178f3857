import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from uavsep.core import DegenerateGeometryError, ParameterError, vec3
from uavsep.dynamics import (
    ObstacleState,
    UavState,
    chasing_command,
    cooperative_command,
    saturate_command,
    step_obstacle,
    step_uav,
)

vectors = arrays(np.float64, 3, elements=st.floats(-100, 100, allow_nan=False))


@given(vectors, st.floats(0.1, 50))
def test_saturation_caps_norm_and_keeps_direction(v_c, v_m):
    out = saturate_command(v_c, v_m)
    assert np.linalg.norm(out) <= v_m * (1 + 1e-12)
    if np.linalg.norm(v_c) <= v_m:
        assert np.array_equal(out, v_c)
    else:
        assert np.allclose(np.cross(out, v_c), 0, atol=1e-9 * np.linalg.norm(v_c) ** 2)
        assert np.dot(out, v_c) > 0


def test_saturation_at_exact_limit_is_identity():
    v = vec3(6.0, 8.0, 0.0)
    assert np.array_equal(saturate_command(v, 10.0), v)


def test_speed_converges_to_command():
    s = UavState(vec3(), vec3())
    for _ in range(500):
        s = step_uav(s, vec3(10, 0, 0), l=5.0, dt=0.01)
    assert np.allclose(s.v, [10, 0, 0], atol=1e-8)


def test_speed_never_exceeds_cap_for_saturated_commands(rng):
    # |v| stays within v_m when it starts there and every command is capped
    s = UavState(vec3(), vec3())
    for _ in range(2000):
        s = step_uav(s, saturate_command(rng.normal(size=3) * 30, 10.0), l=5.0, dt=0.01)
        assert np.linalg.norm(s.v) <= 10.0 * (1 + 1e-9)


def test_constant_velocity_obstacle():
    s = ObstacleState(vec3(40, 0, 100), vec3(-5, 0, 0))
    for _ in range(100):
        s = step_obstacle(s, s.v, l=5.0, dt=0.01)
    assert np.allclose(s.p, [35, 0, 100], atol=1e-10)
    assert np.allclose(s.v, [-5, 0, 0], atol=1e-12)


def test_step_rejects_bad_dt():
    with pytest.raises(ParameterError):
        step_uav(UavState(vec3(), vec3()), vec3(), 5.0, 0.0)


@given(vectors, vectors, vectors, st.floats(0.01, 10))
def test_chaser_closes_filtered_gap_at_eps(xi, xi_o, xi_dot, eps):
    gap = xi_o - xi
    if np.linalg.norm(gap) < 1e-6:
        return
    a_o = chasing_command(xi, xi_o, xi_dot, eps)
    closing = np.dot(a_o - xi_dot, gap / np.linalg.norm(gap))
    assert closing == pytest.approx(-eps, rel=1e-9, abs=1e-9)


def test_chaser_degenerate_and_bad_eps():
    with pytest.raises(DegenerateGeometryError):
        chasing_command(vec3(1, 1, 1), vec3(1, 1, 1), vec3(), 1.0)
    with pytest.raises(ParameterError):
        chasing_command(vec3(), vec3(1, 0, 0), vec3(), 0.0)


def test_cooperative_command_mirrors_feedback():
    seen = []
    cooperative_command(0.5, vec3(1, 2, 3), lambda t, e: seen.append((t, e)) or e)
    assert seen[0][0] == 0.5
    assert np.array_equal(seen[0][1], [-1, -2, -3])

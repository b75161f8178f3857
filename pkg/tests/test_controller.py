import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from uavsep.controller import (
    ControllerParams,
    avoid_many,
    avoid_one,
    blend_weight,
    certify_lemma1,
    goal_only_controller,
    make_controller,
    sphere_points,
)
from uavsep.core import DegenerateGeometryError, ParameterError

PARAMS = ControllerParams.for_radius(14.30, 10.0, 10.0, goal=[80.0, 0.0, 100.0], margin=0.5)
directions = arrays(np.float64, 3, elements=st.floats(-1, 1)).filter(lambda v: np.linalg.norm(v) > 1e-3)


def test_params_validation():
    with pytest.raises(ParameterError):
        ControllerParams(24.3, 24.3, 0.5, 10.0)
    with pytest.raises(ParameterError):
        ControllerParams(24.3, 24.8, 0.0, 10.0)
    with pytest.raises(ParameterError):
        ControllerParams(24.3, 24.8, 0.5, 0.0)


def test_blend_weight_profile():
    assert blend_weight(24.3, PARAMS) == 1.0
    assert blend_weight(24.8, PARAMS) == 1.0
    assert blend_weight(25.05, PARAMS) == pytest.approx(0.5)
    assert blend_weight(25.3, PARAMS) == 0.0
    assert blend_weight(100.0, PARAMS) == 0.0


@given(directions)
def test_boundary_command_is_radial_at_full_speed(d):
    e = 24.3 * d / np.linalg.norm(d)
    cmd = avoid_one(0.0, e, PARAMS, xi_hat=np.zeros(3))
    assert np.allclose(cmd, 10.0 * e / 24.3, atol=1e-12)


@given(directions, st.floats(0.1, 200))
def test_command_never_exceeds_cap(d, dist):
    e = dist * d / np.linalg.norm(d)
    cmd = avoid_one(0.0, e, PARAMS, xi_hat=np.array([-50.0, 3.0, 100.0]))
    assert np.linalg.norm(cmd) <= 10.0 * (1 + 1e-12)


def test_far_from_obstacle_goes_to_goal():
    cmd = avoid_one(0.0, np.array([100.0, 0, 0]), PARAMS, xi_hat=np.array([79.0, 0.0, 100.0]))
    assert np.allclose(cmd, [1.0, 0.0, 0.0])


def test_coincident_estimates_raise():
    with pytest.raises(DegenerateGeometryError):
        avoid_one(0.0, np.zeros(3), PARAMS)


@given(directions)
def test_avoid_many_reduces_to_single(d):
    e = 24.5 * d / np.linalg.norm(d)
    far = np.array([500.0, 0.0, 0.0])
    xi = np.array([0.0, 0.0, 100.0])
    assert np.allclose(avoid_many(0.0, [e, far], PARAMS, xi), avoid_one(0.0, e, PARAMS, xi))


def test_avoid_many_opposed_obstacles_uses_tie_break():
    e = np.array([24.3, 0, 0])
    cmd = avoid_many(0.0, [e, -e], PARAMS)
    assert 0 < np.linalg.norm(cmd) <= 10.0
    assert abs(np.dot(cmd, e)) < 1e-9


def test_sphere_points_unit_and_balanced():
    pts = sphere_points(10_000)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)
    assert np.allclose(pts.mean(axis=0), 0.0, atol=1e-3)


def test_certificate_passes_for_shipped_controller():
    rep = certify_lemma1(make_controller(PARAMS, np.zeros(3)), 14.30, 10.0, 10.0)
    assert rep.certified
    assert rep.min_inner == pytest.approx(243.0)


def test_certificate_rejects_goal_only_and_half_blend():
    assert not certify_lemma1(goal_only_controller(PARAMS, np.zeros(3)), 14.30, 10.0, 10.0).certified

    def half(t, e):
        # radial term forced to weight 0.5 at the boundary
        radial = 10.0 * e / np.linalg.norm(e)
        goal = np.array([10.0, 0.0, 0.0])
        return 0.5 * radial + 0.5 * goal

    rep = certify_lemma1(half, 14.30, 10.0, 10.0)
    assert not rep.certified
    assert rep.worst_direction[0] < 0


def test_certificate_requires_enough_samples():
    with pytest.raises(ParameterError):
        certify_lemma1(make_controller(PARAMS), 14.30, 10.0, 10.0, n_samples=999)

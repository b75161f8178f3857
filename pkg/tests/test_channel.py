import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from uavsep.channel import (
    EXPECTATION,
    SAMPLE_HOLD,
    ChannelState,
    DelayBuffer,
    SmoothNoise,
    UncertaintyBudget,
    bounded_noise,
    delayed_sample,
    estimate_link,
    expectation_ode_step,
    lag_gain,
    lambda_bound,
    sample_hold_estimate,
)
from uavsep.core import ParameterError


def test_budget_validation():
    with pytest.raises(ParameterError):
        UncertaintyBudget(theta_m=1.0)
    with pytest.raises(ParameterError):
        UncertaintyBudget(b=-1.0)
    with pytest.raises(ParameterError):
        UncertaintyBudget(T_s=0.0)


def test_lag_gain_value():
    assert lag_gain(0.1, 0.01) == pytest.approx(900.0)
    with pytest.raises(ParameterError):
        lag_gain(0.0, 0.01)


def test_delay_buffer_interpolates_and_holds_history():
    buf = DelayBuffer([0.0, 0.0, 0.0], dt=0.1, horizon=1.0)
    for j in range(1, 11):
        buf.push([j * 0.1, 0.0, 0.0])
    assert buf.latest_time == pytest.approx(1.0)
    assert delayed_sample(buf, 1.0, 0.25)[0] == pytest.approx(0.75)
    assert delayed_sample(buf, 0.1, 0.5)[0] == 0.0
    with pytest.raises(ParameterError):
        buf.sample(1.5)
    with pytest.raises(ParameterError):
        delayed_sample(buf, 1.0, -0.1)


def test_delay_buffer_wraps_and_rejects_stale_lookups():
    buf = DelayBuffer(np.zeros(3), dt=0.01, horizon=0.05)
    for j in range(1, 1000):
        buf.push(np.full(3, j * 0.01))
    assert buf.sample(9.97)[0] == pytest.approx(9.97)
    with pytest.raises(ParameterError):
        buf.sample(5.0)


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 10.0), st.floats(0.0, 10.0))
def test_noise_respects_amplitude_and_rate(seed, bound, rate):
    noise = SmoothNoise(seed, bound, rate)
    t = np.linspace(0, 200, 4001)
    assert np.all(np.linalg.norm(noise.value(t), axis=1) <= bound * (1 + 1e-12) + 1e-15)
    assert np.all(np.linalg.norm(noise.rate(t), axis=1) <= rate * (1 + 1e-12) + 1e-15)


def test_noise_rate_is_derivative_of_value():
    noise = SmoothNoise(7, 3.0, 3.0)
    t, h = np.linspace(0, 20, 50), 1e-6
    fd = (noise.value(t + h) - noise.value(t - h)) / (2 * h)
    assert np.allclose(fd, noise.rate(t), atol=1e-6)


def test_bounded_noise_is_deterministic():
    a = bounded_noise(np.arange(5.0), 11, 1.0, 1.0)
    b = bounded_noise(np.arange(5.0), 11, 1.0, 1.0)
    assert np.array_equal(a, b)
    assert bounded_noise(0.0, 11, 0.0, 0.0).tolist() == [0.0, 0.0, 0.0]


def test_expectation_step_without_loss_passes_input_through():
    out = expectation_ode_step(np.zeros(3), np.ones(3), 0.0, 0.01, 0.01, u_end=np.full(3, 2.0))
    assert np.array_equal(out, np.full(3, 2.0))


def test_expectation_step_matches_exponential_decay():
    k = lag_gain(0.2, 0.01)
    out = expectation_ode_step(np.zeros(3), np.ones(3), 0.2, 0.01, 0.001)
    assert np.allclose(out, 1 - math.exp(-k * 0.001), atol=1e-14)


def test_channel_state_starts_at_initial_value_and_converges():
    ch = ChannelState([1.0, 2.0, 3.0], tau_d=0.05, theta=0.1, T_s=0.01, dt=0.01)
    assert np.array_equal(ch.estimate_state, [1, 2, 3])
    for _ in range(100):
        ch.push([4.0, 4.0, 4.0])
        ch.advance(True)
    assert np.allclose(ch.estimate_state, 4.0, atol=1e-9)


def test_expectation_tracks_ramp_with_delay_and_lag():
    # xi_o = v t: steady lag is v (tau + theta T_s / (1 - theta)), the lambda bound itself
    v, tau, theta, T_s = 5.0, 1.0, 0.1, 0.01
    ch = ChannelState([0.0, 0.0, 0.0], tau, theta, T_s, 0.01, model=EXPECTATION)
    for j in range(1, 501):
        ch.push([v * j * 0.01, 0, 0])
        ch.advance(True)
    lam = v * 5.0 - ch.xi_bar[0]
    assert lam == pytest.approx(lambda_bound(v, tau, theta, T_s), rel=1e-9)


def test_sample_hold_loss_draws_only_on_ticks():
    rng = np.random.default_rng(0)
    ch = ChannelState(np.zeros(3), 0.0, 0.5, 0.01, 0.005, rng=rng, model=SAMPLE_HOLD)
    draws = 0
    for j in range(1, 41):
        ch.push(np.full(3, float(j)))
        before = ch.rng.bit_generator.state["state"]["state"]
        ch.advance(j % 2 == 0)
        draws += before != ch.rng.bit_generator.state["state"]["state"]
    assert draws == 20


def test_sample_hold_estimate_extremes():
    ch = ChannelState(np.zeros(3), 0.0, 1.0, 0.01, 0.01, rng=np.random.default_rng(0), model=SAMPLE_HOLD)
    assert np.array_equal(sample_hold_estimate(ch, np.ones(3), 1.0), np.zeros(3))
    assert np.array_equal(sample_hold_estimate(ch, np.ones(3), 0.0), np.ones(3))
    with pytest.raises(ParameterError):
        sample_hold_estimate(ch, np.ones(3), 1.5)


def test_estimate_link_returns_noisy_estimate_and_lag():
    ch = ChannelState(np.zeros(3), 0.0, 0.0, 0.01, 0.01)
    xi_hat, lam = estimate_link(ch, np.ones(3), np.full(3, 0.5))
    assert np.array_equal(xi_hat, np.full(3, 0.5))
    assert np.array_equal(lam, np.ones(3))


def test_lambda_bound_formula():
    assert lambda_bound(5.0, 1.0, 0.1, 0.01) == pytest.approx(5.0 + 0.1 * 0.01 * 5.0 / 0.9)
    assert lambda_bound(0.0, 3.0, 0.5, 0.01) == 0.0
    with pytest.raises(ParameterError):
        lambda_bound(1.0, 1.0, 1.0, 0.01)


def test_unknown_model_rejected():
    with pytest.raises(ParameterError):
        ChannelState(np.zeros(3), 0.0, 0.1, 0.01, 0.01, model="magic")

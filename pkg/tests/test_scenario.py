import numpy as np
import pytest

from uavsep.core import ObstacleParams
from uavsep.sim import ConfigError, ObstacleSpec, run_multi_preset, run_scenario
from uavsep.sim.presets import PRESET_NAMES, RADII, preset
from uavsep.sim.scenario import SHELL_NA, SHELL_OK, speed_cap


def _short(name, duration=3.0, **kw):
    cfg = preset(name)
    cfg.duration = duration
    for k, v in kw.items():
        setattr(cfg, k, v)
    return cfg


def test_trace_covers_horizon_and_shapes():
    trace, verdict = run_scenario(_short("sim2-caseB", 2.0))
    assert len(trace) == 201
    assert trace.t[-1] == pytest.approx(2.0)
    assert trace.p_o.shape == (201, 3, 3)
    assert trace.dist_est.shape == (201, 3)
    assert len(verdict.min_true_per_obstacle) == 3


def test_e_o_recomputable_from_stored_estimates():
    trace, _ = run_scenario(_short("sim1-caseB"))
    e = trace.xi_hat[:, None, :] - trace.xi_hat_o
    assert np.allclose(np.linalg.norm(e, axis=-1), trace.dist_est, rtol=0, atol=1e-12)


def test_filtered_rate_matches_applied_command():
    trace, _ = run_scenario(_short("sim1-caseB"))
    dt = trace.t[1] - trace.t[0]
    fd = np.diff(trace.xi, axis=0) / dt
    assert np.allclose(fd, trace.v_c[:-1], atol=1e-9)


def test_record_view():
    trace, _ = run_scenario(_short("sim2-caseB", 0.5))
    rec = trace[10]
    assert rec.t == pytest.approx(0.1)
    assert len(rec.xi_hat_o) == 3
    assert rec.dist_est[1] == pytest.approx(trace.dist_est[10, 1])
    assert set(rec.flags) == {"est_violation", "collision", "shell", "lambda_ok", "speed_ok"}


def test_same_seed_same_trace_different_seed_differs():
    a, _ = run_scenario(_short("sim1-caseB"))
    b, _ = run_scenario(_short("sim1-caseB"))
    c, _ = run_scenario(_short("sim1-caseB", seed=1))
    assert np.array_equal(a.xi_hat_o, b.xi_hat_o) and np.array_equal(a.p, b.p)
    assert not np.array_equal(a.xi_hat, c.xi_hat)


def test_collision_flag_consistent_with_distance():
    _, v = run_scenario(_short("sim1-caseC-adversarial", 20.0))
    assert v.collision == (v.min_true_distance < v.collision_distance)
    assert v.violation


def test_single_obstacle_multi_path_identical():
    cfg = _short("sim1-caseB")
    _, v = run_scenario(cfg)
    assert run_multi_preset(cfg) == v


def test_validation_lists_all_problems():
    cfg = preset("sim1-caseB")
    cfg.dt = 0.02
    cfg.duration = -1.0
    cfg.obstacles[0].behavior = "teleport"
    with pytest.raises(ConfigError) as exc:
        run_scenario(cfg)
    text = " ".join(exc.value.problems)
    assert "dt_s" in text and "duration_s" in text and "behavior" in text


def test_validation_rejects_mixed_radii_and_bad_dt_ratio():
    cfg = preset("sim2-caseB")
    cfg.obstacles[0] = ObstacleSpec(ObstacleParams(5.0, 3.0), [0, 0, 0], [0, 0, 0])
    cfg.dt = 0.003
    problems = cfg.problems()
    assert any("r_o_m" in p for p in problems)
    assert any("multiple" in p for p in problems)


def test_auto_radius_resolves_to_bound():
    cfg = preset("sim1-caseB")
    cfg.r_s = None
    assert cfg.resolved_r_s() == pytest.approx(14.302614096333910)


def test_chaser_speed_cap():
    cfg = preset("sim1-caseC-adversarial")
    assert speed_cap(cfg, 0) == cfg.uav.v_m + cfg.obstacles[0].chase_eps
    assert speed_cap(preset("sim1-caseB"), 0) == 5.0


def test_sample_hold_model_runs():
    trace, v = run_scenario(_short("sim1-caseB", channel_model="sample_hold"))
    assert np.isfinite(trace.dist_est).all()
    assert not v.collision


def test_shell_monitor_satisfied_when_started_on_boundary():
    # place the obstacle so the run starts inside the boundary shell
    cfg = _short("sim1-caseB", 1.0)
    probe, _ = run_scenario(_short("sim1-caseB", 0.01))
    shift = probe.dist_est[0, 0] - (cfg.resolved_r_s() + cfg.r_o + 0.05)
    cfg.obstacles[0].p0 = cfg.obstacles[0].p0 - np.array([shift, 0.0, 0.0])
    trace, v = run_scenario(cfg)
    assert trace.shell[0, 0] == SHELL_OK
    assert v.monitors["shell_checks"] > 0
    assert v.monitors["shell_violations"] == 0
    assert not v.violation


def test_presets_catalog():
    assert set(RADII) == set(PRESET_NAMES)
    for name in PRESET_NAMES:
        cfg = preset(name)
        assert cfg.validate() is cfg
        assert cfg.resolved_r_s() == RADII[name]
    with pytest.raises(KeyError):
        preset("nope")


def test_monitor_codes_default_not_applicable():
    trace, _ = run_scenario(_short("sim1-caseA", 1.0))
    assert (trace.shell == SHELL_NA).all()


SAFE_PRESETS = ("sim1-caseA", "sim1-caseB", "sim2-caseB", "sim3-coop", "exp1", "exp2", "exp3")


@pytest.mark.parametrize("name", SAFE_PRESETS)
@pytest.mark.parametrize("seed", [1, 11, 16, 23])
def test_safe_presets_hold_across_seeds(name, seed):
    # seeds 11, 16 and 23 tripped earlier, narrower controller margins
    cfg = preset(name).with_overrides(seed=seed)
    trace, v = run_scenario(cfg)
    assert not v.violation and not v.collision
    assert trace.lambda_ok.all() and trace.speed_ok.all()

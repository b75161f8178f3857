"""Named property suites run by ``uavsep verify``.

Every suite uses fixed seeds and returns a :class:`SuiteResult` whose lines
are printed as-is.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from .controller import ControllerParams, certify_lemma1, goal_only_controller, make_controller
from .radius import maneuver_radius
from .sim.checks import (
    channel_consistency,
    equality_construction,
    lambda_sweep,
    lemma2_sweep,
    necessity_construction,
    proposition2_report,
)
from .sim.presets import PRESET_NAMES, preset
from .sim.scenario import LAMBDA_FACTOR, run_scenario


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    lines: List[str] = field(default_factory=list)

    def check(self, ok: bool, text: str) -> bool:
        self.passed = self.passed and bool(ok)
        self.lines.append(f"[{'PASS' if ok else 'FAIL'}] {text}")
        return ok

    def note(self, text: str) -> None:
        self.lines.append(f"[INFO] {text}")


_RUN_CACHE: Dict[str, tuple] = {}


def _run(name):
    # full preset runs are shared between suites within one process
    if name not in _RUN_CACHE:
        _RUN_CACHE[name] = run_scenario(preset(name))
    return _RUN_CACHE[name]


def suite_lemma2(n_cases=100, seed=0) -> SuiteResult:
    res = SuiteResult("lemma2")
    reports = lemma2_sweep(n_cases, seed=seed, dt=1e-3)
    norm = max(r.max_norm_ratio for r in reports)
    checked = [r for r in reports if r.rate_checked]
    rate = max((r.max_rate_ratio for r in checked), default=0.0)
    res.check(all(r.norm_ok for r in reports), f"|x| <= y_max on {n_cases} profiles (max ratio {norm:.9f})")
    res.check(
        all(r.rate_ok for r in checked),
        f"|x'| <= (k_max/k_min) v_ymax on {len(checked)} eligible profiles (max ratio {rate:.6f})",
    )
    return res


def suite_prop1() -> SuiteResult:
    res = SuiteResult("prop1")
    for name in PRESET_NAMES:
        trace, verdict = _run(name)
        ratio = verdict.monitors["max_speed_ratio"]
        res.check(bool(trace.speed_ok.all()), f"{name}: max |v| / v_m = {ratio:.9f}")
    return res


def suite_prop2() -> SuiteResult:
    res = SuiteResult("prop2")
    r, r_v, l = 15.0, 3.0, 5.0
    eq = equality_construction(r, r_v, l)
    dmin = float(np.linalg.norm(eq.p_tilde, axis=1).min())
    res.check(abs(dmin - r) <= 1e-3 * r, f"equality construction: min |p~| = {dmin:.6f} (r = {r})")
    nec = necessity_construction(r, r_v, l, eps_o=1.0)
    rep = proposition2_report(nec, r, r_v)
    res.check(
        rep.premise_samples == 0 and rep.min_true_distance < r,
        f"sub-threshold construction: premise fails, min |p~| = {rep.min_true_distance:.6f} < {r}",
    )
    for name in ("sim1-caseA", "sim1-caseB"):
        trace, _ = _run(name)
        cfg = preset(name)
        rr = cfg.uav.r_m + cfg.r_o
        rv = maneuver_radius(cfg.uav.v_m, cfg.obstacles[0].params.v_o, cfg.uav.l)
        rep = proposition2_report(trace, rr, rv)
        res.check(rep.holds, f"{name} replay: implication holds over {rep.premise_samples} samples")
    return res


def suite_prop3(n_cases=100, seed=0) -> SuiteResult:
    res = SuiteResult("prop3")
    ratios = lambda_sweep(n_cases, seed=seed)
    res.check(max(ratios) <= LAMBDA_FACTOR, f"{n_cases} random paths: max |lambda| / bound = {max(ratios):.6f}")
    for name in PRESET_NAMES:
        trace, verdict = _run(name)
        worst = max(verdict.monitors["max_lambda_ratio_per_obstacle"])
        res.check(bool(trace.lambda_ok.all()), f"{name}: max |lambda| / bound = {worst:.6f}")
    return res


def suite_theorem1() -> SuiteResult:
    res = SuiteResult("theorem1")
    for name in ("sim1-caseA", "sim1-caseB", "sim2-caseB", "sim3-coop", "exp1", "exp2", "exp3"):
        _, v = _run(name)
        res.check(
            not v.violation and not v.collision,
            f"{name}: min |e_o| = {v.min_estimated_distance:.4f} >= {v.boundary:.4f}, "
            f"shell {v.monitors['shell_checks']}/{v.monitors['shell_violations']} checked/violated",
        )
        if name in ("sim1-caseB", "sim2-caseB"):
            res.check(v.monitors["shell_violations"] == 0, f"{name}: no shell-condition violations")
    _, v = _run("sim1-caseC-adversarial")
    res.check(
        v.violation and v.monitors["shell_violations"] > 0,
        f"sim1-caseC-adversarial: violation at {v.first_violation_time} s, "
        f"{v.monitors['shell_violations']} shell violations recorded",
    )
    return res


def suite_lemma1(n_samples=10_000) -> SuiteResult:
    res = SuiteResult("lemma1")
    for name in PRESET_NAMES:
        cfg = preset(name)
        r_s = cfg.resolved_r_s()
        params = ControllerParams.for_radius(r_s, cfg.r_o, cfg.uav.v_m, cfg.goal, cfg.margin, cfg.goal_gain)
        cert = certify_lemma1(make_controller(params, cfg.p0), r_s, cfg.r_o, cfg.uav.v_m, n_samples)
        res.check(cert.certified, f"{name}: min x.c(x) = {cert.min_inner:.6f} >= {cert.required:.6f}")
    cfg = preset("sim1-caseB")
    params = ControllerParams.for_radius(14.30, cfg.r_o, cfg.uav.v_m, cfg.goal, cfg.margin)
    cert = certify_lemma1(goal_only_controller(params, cfg.p0), 14.30, cfg.r_o, cfg.uav.v_m, n_samples)
    res.check(not cert.certified, f"goal-only control rejected (min x.c(x) = {cert.min_inner:.3f})")
    return res


def suite_channel_ks(seed=0) -> SuiteResult:
    res = SuiteResult("channel-ks")
    c = channel_consistency(seed=seed)
    res.check(
        c.bounded,
        f"residual bounded: max {c.max_residual:.6f} m <= {c.residual_bound:.6f} m (longest loss run {c.longest_loss_run})",
    )
    verdict = "below" if c.ks_pass else "above"
    res.note(f"KS statistic {c.ks:.6f} ({verdict} 1.36/sqrt(n) = {c.ks_critical:.6f}, n = {c.n}); reported, not asserted")
    return res


SUITES: Dict[str, Callable[[], SuiteResult]] = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "prop1": suite_prop1,
    "prop2": suite_prop2,
    "prop3": suite_prop3,
    "theorem1": suite_theorem1,
    "channel-ks": suite_channel_ks,
}


def run_suites(name: str) -> List[SuiteResult]:
    names = list(SUITES) if name == "all" else [name]
    return [SUITES[n]() for n in names]

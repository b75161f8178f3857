import io
import json
import os
import subprocess
import sys

import pytest

from uavsep.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize(
    "name,expected", [("sim1-caseA", "5.30"), ("sim1-caseB", "14.30"), ("sim1-caseC", "22.31"), ("exp2", "0.71")]
)
def test_radius_preset(name, expected):
    code, out, _ = run("radius", "--preset", name)
    assert code == 0
    assert f"(rounded {expected} m)" in out


def test_radius_json_and_flags():
    code, out, _ = run("radius", "--r-m", "5", "--l", "5", "--v-m", "10", "--r-o", "10", "--v-o", "5", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["r_e_m"] == 0.0
    assert d["r_s_designed_m"] == pytest.approx((15**2 + 9) ** 0.5 - 10)


def test_radius_bad_input_exit_2():
    assert run("radius", "--r-m", "5")[0] == 2
    code, _, err = run("radius", "--r-m", "5", "--l", "5", "--v-m", "10", "--r-o", "10", "--v-o", "5", "--theta-m", "1")
    assert code == 2 and "theta_m" in err


def test_run_exit_codes_and_outputs(tmp_path):
    code, out, _ = run("run", "--preset", "sim1-caseB", "--seed", "7", "--out", str(tmp_path / "b"))
    assert code == 0 and "SAFE" in out
    assert {p.name for p in (tmp_path / "b").iterdir()} == {"trace.csv", "verdict.txt", "verdict.json"}
    code, _, _ = run("run", "--preset", "sim1-caseC-adversarial", "--seed", "7", "--out", str(tmp_path / "c"))
    assert code == 1


def test_run_overrides(tmp_path):
    code, out, _ = run("run", "--preset", "sim1-caseA", "--duration", "1", "--dt", "0.005", "--json", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "trace.csv").read_text().splitlines()
    assert len(lines) == 1 + 201
    assert json.loads(out)["violation"] is False


def test_run_usage_errors(tmp_path):
    assert run("run")[0] == 2
    assert run("run", "--preset", "nope")[0] == 2
    assert run("run", "--preset", "sim1-caseA", "--seed", "-3")[0] == 2
    assert run("run", "--preset", "sim1-caseA", "--dt", "0.02", "--out", str(tmp_path))[0] == 2
    assert run("run", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_export_then_run_config(tmp_path):
    cfg = tmp_path / "exp.json"
    assert run("export", "--preset", "exp1", "--out", str(cfg))[0] == 0
    code, out, _ = run("run", "--config", str(cfg), "--duration", "2", "--out", str(tmp_path / "o"))
    assert code == 0 and "exp1" in out


def test_presets_listing():
    code, out, _ = run("presets")
    assert code == 0
    assert "sim1-caseC-adversarial" in out and "sim3-coop" in out


def test_verify_single_suite_and_unknown():
    code, out, _ = run("verify", "--suite", "prop2")
    assert code == 0 and "== prop2: PASS" in out
    assert run("verify", "--suite", "nope")[0] == 2


def test_module_entry_point_help():
    res = subprocess.run([sys.executable, "-m", "uavsep", "--help"], capture_output=True, text=True)
    assert res.returncode == 0 and "radius" in res.stdout


def test_numpy_backend_via_flag():
    env = dict(os.environ, UAVSEP_DISABLE_NUMBA="1")
    code = (
        "from uavsep import kernels; from uavsep.cli import main; import io;"
        "print(kernels.BACKEND); o = io.StringIO();"
        "main(['radius', '--preset', 'sim1-caseB'], out=o); print(o.getvalue())"
    )
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert res.stdout.startswith("numpy")
    assert "14.30" in res.stdout


def test_backends_give_same_trace(tmp_path):
    # one short run under each backend; CSV bytes must agree
    for flag, sub in (("0", "a"), ("1", "b")):
        env = dict(os.environ, UAVSEP_DISABLE_NUMBA=flag)
        res = subprocess.run(
            [sys.executable, "-m", "uavsep", "run", "--preset", "sim1-caseB", "--duration", "2", "--out", str(tmp_path / sub)],
            capture_output=True, text=True, env=env,
        )
        assert res.returncode == 0, res.stderr
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()

"""Compare the numba and pure-numpy kernel backends.

Each backend runs in its own interpreter because the choice is made at
import time from ``UAVSEP_DISABLE_NUMBA``.  Compilation is excluded: every
kernel is called once on tiny inputs before timing.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from uavsep import _accel, kernels
from uavsep.sim.presets import preset
from uavsep.sim.scenario import run_scenario

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
n = 20_000
u = np.cumsum(rng.normal(size=(n, 3)), axis=0)
k = rng.uniform(1.0, 5.0, size=n)
cmds = rng.normal(size=(n, 3))
lost = rng.random(n) < 0.1
z = np.sort(rng.normal(size=n))

cases = {
    "lag_filter": lambda: kernels.lag_filter(u, 900.0, 0.01, u[0]),
    "lemma2_integrate": lambda: kernels.lemma2_integrate(k, u, u[0] * 0.0, 1e-3),
    "integrate_track": lambda: kernels.integrate_track(u[0], u[0] * 0.0, cmds, 5.0, 0.01),
    "sample_hold": lambda: kernels.sample_hold(u, lost, u[0]),
    "ks_normal_sorted": lambda: kernels.ks_normal_sorted(z),
    "run sim1-caseB (20 s)": lambda: run_scenario(preset("sim1-caseB")),
}
for fn in cases.values():
    fn()  # warm-up / compile
out = {}
for name, fn in cases.items():
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps({"backend": _accel.BACKEND, "times": out}))
"""


def measure(disable: bool, repeat: int) -> dict:
    env = dict(os.environ)
    if disable:
        env["UAVSEP_DISABLE_NUMBA"] = "1"
    else:
        env.pop("UAVSEP_DISABLE_NUMBA", None)
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    fast = measure(False, args.repeat)
    slow = measure(True, args.repeat)
    print(f"{'kernel':26s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:26s} {t_fast * 1e3:8.2f}ms {t_slow * 1e3:8.2f}ms {t_slow / t_fast:7.1f}x")


if __name__ == "__main__":
    main()

"""CSV trace and verdict files.

Column order: ``t_s``; the UAV block; one block per obstacle in config
order; the distance block; the monitor flags as 0/1.  Numbers are written
with 9 significant digits.
"""

import json
from pathlib import Path

import numpy as np

from .sim.scenario import SHELL_NA, SHELL_VIOLATED, RunVerdict, Trace

AXES = ("x", "y", "z")
UAV_BLOCK = (("p", "m"), ("v", "mps"), ("xi", "m"), ("xi_hat", "m"), ("v_c", "mps"))
OBSTACLE_BLOCK = (("p", "m"), ("v", "mps"), ("xi", "m"), ("xi_bar", "m"), ("xi_hat", "m"), ("lambda", "m"))
DISTANCES = ("dist_true_m", "dist_filtered_m", "dist_est_m")
FLAGS = ("est_violation", "collision", "shell_checked", "shell_violated", "lambda_ok")


def csv_columns(n_obstacles: int) -> list:
    cols = ["t_s"]
    cols += [f"uav_{q}_{a}_{u}" for q, u in UAV_BLOCK for a in AXES]
    for k in range(1, n_obstacles + 1):
        cols += [f"o{k}_{q}_{a}_{u}" for q, u in OBSTACLE_BLOCK for a in AXES]
    for k in range(1, n_obstacles + 1):
        cols += [f"o{k}_{d}" for d in DISTANCES]
    for k in range(1, n_obstacles + 1):
        cols += [f"o{k}_{f}" for f in FLAGS]
    cols.append("speed_ok")
    return cols


def trace_table(trace: Trace) -> np.ndarray:
    """All CSV columns as one float array, in :func:`csv_columns` order."""
    n, m = len(trace), trace.n_obstacles
    parts = [trace.t[:, None], trace.p, trace.v, trace.xi, trace.xi_hat, trace.v_c]
    for k in range(m):
        parts += [trace.p_o[:, k], trace.v_o[:, k], trace.xi_o[:, k], trace.xi_bar_o[:, k]]
        parts += [trace.xi_hat_o[:, k], trace.lambda_o[:, k]]
    for k in range(m):
        parts += [trace.dist_true[:, k, None], trace.dist_filtered[:, k, None], trace.dist_est[:, k, None]]
    for k in range(m):
        parts += [
            trace.est_violation[:, k, None],
            trace.collision[:, k, None],
            (trace.shell[:, k, None] != SHELL_NA),
            (trace.shell[:, k, None] == SHELL_VIOLATED),
            trace.lambda_ok[:, k, None],
        ]
    parts.append(trace.speed_ok[:, None])
    table = np.hstack([np.asarray(p, dtype=np.float64).reshape(n, -1) for p in parts])
    assert table.shape[1] == len(csv_columns(m))
    return table


def write_trace_csv(trace: Trace, path) -> None:
    cols = csv_columns(trace.n_obstacles)
    np.savetxt(path, trace_table(trace), fmt="%.9g", delimiter=",", header=",".join(cols), comments="")


def verdict_text(verdict: RunVerdict, seed=None) -> str:
    mon = verdict.monitors
    status = "VIOLATION" if verdict.violation else "SAFE"
    lines = [
        f"scenario            {verdict.scenario}" + ("" if seed is None else f" (seed {seed})"),
        f"status              {status}",
        f"r_s                 {verdict.r_s:.4f} m",
        f"boundary r_s + r_o  {verdict.boundary:.4f} m",
        f"min |e_o|           {verdict.min_estimated_distance:.4f} m",
        f"min |xi_o tilde|    {verdict.min_filtered_distance:.4f} m",
        f"min |p_o tilde|     {verdict.min_true_distance:.4f} m (collision below {verdict.collision_distance:.4f} m)",
        f"first violation     {_fmt_time(verdict.first_violation_time)}",
        f"collision           {'yes at ' + _fmt_time(verdict.first_collision_time) if verdict.collision else 'no'}",
    ]
    if len(verdict.min_estimated_per_obstacle) > 1:
        for k, (e, p) in enumerate(zip(verdict.min_estimated_per_obstacle, verdict.min_true_per_obstacle), 1):
            lines.append(f"  obstacle {k}: min |e_o| {e:.4f} m, min |p_o tilde| {p:.4f} m")
    lines += [
        f"speed condition     {'holds' if mon['speed_condition_ok'] else 'fails'}",
        f"shell checks        {mon['shell_checks']} samples, {mon['shell_violations']} violated",
        f"max |v| / v_m       {mon['max_speed_ratio']:.6f}",
        "max lambda ratio    " + ", ".join(f"{x:.4f}" for x in mon["max_lambda_ratio_per_obstacle"]),
    ]
    return "\n".join(lines) + "\n"


def _fmt_time(t):
    return "none" if t is None else f"{t:.2f} s"


def write_run(trace: Trace, verdict: RunVerdict, out_dir, seed=None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trace_csv(trace, out / "trace.csv")
    (out / "verdict.txt").write_text(verdict_text(verdict, seed))
    payload = dict(verdict.as_dict(), seed=seed)
    (out / "verdict.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return out

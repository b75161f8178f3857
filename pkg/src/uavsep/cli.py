"""Command-line front end.

Exit codes: 0 safe or passed, 1 invariant violation or failed suite,
2 usage or configuration error.
"""

import argparse
import json
import sys

from .channel import UncertaintyBudget
from .config import ConfigError, config_to_dict, load_config
from .core import ObstacleParams, ParameterError, VehicleParams
from .export import verdict_text, write_run
from .radius import radius_report
from .sim.presets import PRESET_NAMES, RADII, preset
from .sim.scenario import run_scenario
from .suites import SUITES, run_suites

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


RADIUS_FLAGS = (
    ("r_m", "m"),
    ("l", "1/s"),
    ("v_m", "m/s"),
    ("r_o", "m"),
    ("v_o", "m/s"),
    ("b", "m"),
    ("v_b", "m/s"),
    ("b_o", "m"),
    ("v_bo", "m/s"),
    ("tau_dm", "s"),
    ("theta_m", ""),
    ("T_s", "s"),
)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uavsep", description="Safety radii and avoidance simulation under imperfect communication.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("radius", help="compute r_v, r_e and the smallest safety radius")
    src = r.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=PRESET_NAMES)
    src.add_argument("--config", metavar="PATH")
    for name, unit in RADIUS_FLAGS:
        r.add_argument(f"--{name.replace('_', '-')}", dest=name, type=float, help=unit or None)
    r.add_argument("--json", action="store_true", help="print machine-readable output")

    run = sub.add_parser("run", help="simulate a scenario and write trace.csv and verdict files")
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=PRESET_NAMES)
    src.add_argument("--config", metavar="PATH")
    run.add_argument("--seed", type=_seed)
    run.add_argument("--dt", type=float)
    run.add_argument("--duration", type=float)
    run.add_argument("--out", metavar="DIR", default="out")
    run.add_argument("--json", action="store_true", help="print the verdict as JSON")

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", default="all", help=f"one of {', '.join(list(SUITES) + ['all'])}")

    sub.add_parser("presets", help="list built-in scenarios")

    e = sub.add_parser("export", help="write a preset as a JSON config file")
    e.add_argument("--preset", choices=PRESET_NAMES, required=True)
    e.add_argument("--out", metavar="PATH", help="file to write (default: stdout)")
    return p


def _load(args):
    return preset(args.preset) if args.preset else load_config(args.config)


def cmd_radius(args, out) -> int:
    flags = {name: getattr(args, name) for name, _ in RADIUS_FLAGS}
    if args.preset or args.config:
        cfg = _load(args)
        vehicle = cfg.uav
        obstacle = ObstacleParams(cfg.r_o, cfg.v_o_max)
        budget = cfg.budget
        configured = cfg.r_s
    else:
        missing = [n for n in ("r_m", "l", "v_m", "r_o", "v_o") if flags[n] is None]
        if missing:
            raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))
        vehicle = VehicleParams(flags["r_m"], flags["l"], flags["v_m"])
        obstacle = ObstacleParams(flags["r_o"], flags["v_o"])
        budget = UncertaintyBudget(
            **{n: flags[n] for n in ("b", "v_b", "b_o", "v_bo", "tau_dm", "theta_m", "T_s") if flags[n] is not None}
        )
        configured = None
    report = radius_report(vehicle, obstacle, budget)
    if args.json:
        payload = report.as_dict()
        payload["r_s_configured_m"] = configured
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    cond = "holds" if report.speed_condition_ok else "fails"
    lines = [
        f"r_v = {report.r_v:.6f} m",
        f"r_e = {report.r_e:.6f} m",
        f"r_s >= {report.r_s_designed:.6f} m (rounded {report.r_s_designed:.2f} m)",
        f"practical radius on estimated distance >= {report.r_s_practical:.6f} m",
        f"speed condition v_m >= v_o + v_b + v_bo: {cond}",
    ]
    if configured is not None:
        lines.append(f"configured r_s = {configured:.2f} m")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_run(args, out) -> int:
    cfg = _load(args).with_overrides(seed=args.seed, dt=args.dt, duration=args.duration)
    trace, verdict = run_scenario(cfg)
    write_run(trace, verdict, args.out, seed=cfg.seed)
    if args.json:
        out.write(json.dumps(dict(verdict.as_dict(), seed=cfg.seed), indent=2, sort_keys=True) + "\n")
    else:
        out.write(verdict_text(verdict, cfg.seed))
    return EXIT_VIOLATION if verdict.violation else EXIT_OK


def cmd_verify(args, out) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    ok = True
    for res in run_suites(args.suite):
        out.write(f"== {res.name}: {'PASS' if res.passed else 'FAIL'}\n")
        for line in res.lines:
            out.write(f"  {line}\n")
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_presets(args, out) -> int:
    for name in PRESET_NAMES:
        cfg = preset(name)
        kinds = sorted({ob.behavior for ob in cfg.obstacles})
        out.write(
            f"{name:24s} r_s={RADII[name]:<6.2f} obstacles={len(cfg.obstacles)} "
            f"({'/'.join(kinds)}) duration={cfg.duration:g}s\n"
        )
    return EXIT_OK


def cmd_export(args, out) -> int:
    text = json.dumps(config_to_dict(preset(args.preset)), indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


COMMANDS = {
    "radius": cmd_radius,
    "run": cmd_run,
    "verify": cmd_verify,
    "presets": cmd_presets,
    "export": cmd_export,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"uavsep: error: {exc}\n")
        return EXIT_USAGE
    except ConfigError as exc:
        err.write("uavsep: invalid configuration:\n")
        for problem in exc.problems:
            err.write(f"  - {problem}\n")
        return EXIT_USAGE
    except (ParameterError, OSError) as exc:
        err.write(f"uavsep: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # --help exits through argparse
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())

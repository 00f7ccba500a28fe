"""Command-line front end.

Exit codes: 0 all checks pass, 1 at least one check failed, 2 configuration
problem, 3 numeric divergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import sys
from concurrent.futures import ProcessPoolExecutor

from .errors import ConfigError, ControlSimError, DivergedError
from .harness import PRESETS, PRESET_SUMMARIES, check_csv, load_config, run_scenario


def _apply_overrides(cfg, args):
    updates = {}
    if getattr(args, "dt", None) is not None:
        updates["dt"] = args.dt
    if getattr(args, "horizon", None) is not None:
        updates["horizon"] = args.horizon
    if updates:
        cfg = dataclasses.replace(cfg, **updates).validated()
    return cfg


def _run_one(source: str, out_dir: str, dt: float | None, horizon: float | None) -> tuple[int, str]:
    buf = io.StringIO()
    try:
        cfg = load_config(source)
        if dt is not None:
            cfg = dataclasses.replace(cfg, dt=dt).validated()
        if horizon is not None:
            cfg = dataclasses.replace(cfg, horizon=horizon).validated()
        report = run_scenario(cfg, out_dir, emit=lambda line: buf.write(line + "\n"))
        return report.exit_code, buf.getvalue()
    except ConfigError as exc:
        buf.write(f"ERROR config: {exc}\n")
        return 2, buf.getvalue()
    except DivergedError as exc:
        buf.write(f"ERROR diverged: {exc}\n")
        return 3, buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="mccontrol",
        description="Manifold-constraint control scenarios: run, batch-run, and re-check.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one preset or config file")
    run_p.add_argument("source", help="preset name or path to a config file")
    run_p.add_argument("--out", default=None, help="output directory for the CSV (default: config out path or ./out)")
    run_p.add_argument("--dt", type=float, default=None, help="override the time step")
    run_p.add_argument("--horizon", type=float, default=None, help="override the horizon")

    all_p = sub.add_parser("run-all", help="run every preset on a worker pool")
    all_p.add_argument("--out", default=None)
    all_p.add_argument("--dt", type=float, default=None)
    all_p.add_argument("--horizon", type=float, default=None)

    sub.add_parser("list-presets", help="list the built-in presets")

    check_p = sub.add_parser("check", help="re-evaluate acceptance on an existing CSV")
    check_p.add_argument("csv", help="path to a CSV written by `run`")
    check_p.add_argument("--preset", required=True, help="preset the CSV belongs to")

    args = parser.parse_args(argv)

    if args.command == "list-presets":
        for name in PRESETS:
            print(f"{name:12s} {PRESET_SUMMARIES[name]}")
        return 0

    try:
        if args.command == "run":
            cfg = _apply_overrides(load_config(args.source), args)
            return run_scenario(cfg, args.out).exit_code

        if args.command == "run-all":
            worst = 0
            with ProcessPoolExecutor(max_workers=min(len(PRESETS), 5)) as pool:
                futures = [
                    pool.submit(_run_one, name, args.out, args.dt, args.horizon)
                    for name in PRESETS
                ]
                for future in futures:
                    code, text = future.result()
                    sys.stdout.write(text)
                    worst = max(worst, code)
            return worst

        if args.command == "check":
            cfg = load_config(args.preset)
            return check_csv(args.csv, cfg).exit_code
    except ConfigError as exc:
        print(f"ERROR config: {exc}", file=sys.stderr)
        return 2
    except DivergedError as exc:
        print(f"ERROR diverged: {exc}", file=sys.stderr)
        return 3
    except ControlSimError as exc:
        print(f"ERROR numeric: {exc}", file=sys.stderr)
        return 3
    return 2


if __name__ == "__main__":
    raise SystemExit(main())

"""Command-line interface: simulate, analyze, report."""

from __future__ import annotations

import argparse
import sys

from . import harness
from .world import ConfigurationError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convsim",
        description="Convention-emergence simulator and analysis pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the experiment grid, write runs.csv")
    sim.add_argument("--config", help="flat key = value config file")
    sim.add_argument("--out", required=True, help="output directory")
    sim.add_argument("--runs", type=int, help="runs per combination (overrides config)")
    sim.add_argument("--seed", type=int, help="master seed (overrides config)")
    sim.add_argument("--threads", type=int, default=1, help="worker processes")
    sim.add_argument("--trace", action="store_true", help="write per-interaction trace logs")
    sim.add_argument(
        "--dump-lexicons", action="store_true", help="write final lexicons to lexicons.csv"
    )

    ana = sub.add_parser("analyze", help="aggregate runs.csv into summary/tests/fit CSVs")
    ana.add_argument("--in", dest="in_dir", required=True)
    ana.add_argument("--out", dest="out_dir", required=True)

    rep = sub.add_parser("report", help="emit figure-ready per-figure CSVs")
    rep.add_argument("--in", dest="in_dir", required=True)
    rep.add_argument("--out", dest="out_dir", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            values = harness.load_config(args.config)
            if args.runs is not None:
                values["runs"] = args.runs
            if args.seed is not None:
                values["master_seed"] = args.seed
            grid = harness.grid_from_config(values)
            path = harness.execute(
                grid,
                args.out,
                threads=args.threads,
                trace=args.trace,
                dump_lexicons=args.dump_lexicons,
            )
            print(f"wrote {path}")
        elif args.command == "analyze":
            harness.analyze(args.in_dir, args.out_dir)
            print(f"wrote summary.csv, tests.csv, fit.csv to {args.out_dir}")
        elif args.command == "report":
            harness.report(args.in_dir, args.out_dir)
            print(f"wrote per-figure CSVs to {args.out_dir}")
    except (ConfigurationError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

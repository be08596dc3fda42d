"""Command line: ``galilei-lab run --config PATH --suite NAME --out PATH --seed N --set key=value``."""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, default_config_text, load_config
from .report import emit_report, run_suites, summary_lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="galilei-lab", description="Run the Galilei-symmetry check suites.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run check suites and write a JSON report")
    run.add_argument("--config", help="INI configuration file")
    run.add_argument("--suite", action="append", default=None,
                     help="suite name (repeatable, or comma separated); default: all")
    run.add_argument("--out", help="JSON report path (default from config: report.json)")
    run.add_argument("--seed", type=int, help="random seed")
    run.add_argument("--set", dest="overrides", action="append", default=[], metavar="SECTION.KEY=VALUE",
                     help="override a config entry, e.g. --set tolerances.exact=1e-13")
    run.add_argument("--csv-dir", help="directory for CSV sidecars (default: next to the report)")
    run.add_argument("--quiet", action="store_true")
    sub.add_parser("default-config", help="print the default configuration")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "default-config":
        sys.stdout.write(default_config_text())
        return 0
    suites = None
    if args.suite:
        suites = tuple(s.strip() for item in args.suite for s in item.split(",") if s.strip())
    try:
        cfg = load_config(args.config, args.overrides, seed=args.seed, suites=suites, report=args.out,
                          csv_dir=args.csv_dir)
        report = run_suites(cfg)
    except (ConfigError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        emit_report(report, cfg.report, cfg.csv_dir)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        print("\n".join(summary_lines(report)))
        print(f"report: {cfg.report}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end."""

from __future__ import annotations

import argparse
import sys

from . import harness
from .errors import ConfigError


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qscheck",
        description="Exact verification of q-congruence and p-adic "
                    "congruence families.")
    sub = ap.add_subparsers(dest="command", required=True)
    ver = sub.add_parser("verify", help="run one suite (or all) and report")
    ver.add_argument("suite", choices=harness.SUITES + ("all",))
    ver.add_argument("--n-min", type=int, default=None)
    ver.add_argument("--n-max", type=int, default=None)
    ver.add_argument("--p-max", type=int, default=None)
    ver.add_argument("--t", type=int, default=None)
    ver.add_argument("--m-max", type=int, default=None)
    ver.add_argument("--grid-margin", type=int, default=0)
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--report", default=None, metavar="PATH")
    ver.add_argument("--format", choices=("json", "csv", "text"),
                     default=None)
    ver.add_argument("--include-degenerate", action="store_true")
    return ap


def _pick_format(args) -> str:
    if args.format:
        return args.format
    if args.report:
        if args.report.endswith(".json"):
            return "json"
        if args.report.endswith(".csv"):
            return "csv"
    return "text"


def cli_main(argv) -> int:
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as exc:  # argparse reports usage itself
        return 0 if not exc.code else 2
    spec = harness.SuiteSpec(
        suite=args.suite, n_min=args.n_min, n_max=args.n_max,
        p_max=args.p_max, t=args.t, m_max=args.m_max,
        grid_margin=args.grid_margin, jobs=args.jobs,
        include_degenerate=args.include_degenerate,
        report_path=args.report, report_format=args.format)
    try:
        report = harness.run_suite(spec)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    fmt = _pick_format(args)
    try:
        if args.report:
            harness.emit_report(report, args.report, fmt)
        else:
            sys.stdout.write(harness.format_report(report, fmt))
    except OSError as exc:
        print(f"cannot write report: {exc}", file=sys.stderr)
        return 2
    return harness.exit_code(report)


def main() -> int:
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``se3ad bench``, ``se3ad verify``, ``se3ad backends``."""

import argparse
import json
import sys

from . import scalars as sc
from .bench import (
    BenchConfig,
    build_report,
    compare_backends,
    format_report,
    load_config,
    parse_rows,
    with_overrides,
)
from .verify import SUITES, run_suites


def _rows(text):
    try:
        return parse_rows(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text):
    v = float(text)
    if not v > 0.0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(prog="se3ad", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run the Hessian comparison rows")
    b.add_argument("--config", help="JSON problem config (CLI flags override it)")
    b.add_argument("--seed", type=int)
    b.add_argument("--landmarks", type=int, dest="n_landmarks")
    b.add_argument("--rows", type=_rows, default="all", help="'all' or e.g. '1,2,7' or '1-3'")
    b.add_argument("--format", choices=("json", "csv", "table"), default="table")
    b.add_argument("--repeats", type=int)
    b.add_argument("--warmup", type=int)
    b.add_argument("--fd-value-step", type=_positive_float)
    b.add_argument("--fd-grad-step", type=_positive_float)
    b.add_argument("--backend", choices=sorted(sc.BACKENDS), help="scalar backend for the seeds")
    b.add_argument("--out", help="write the report here instead of stdout")

    v = sub.add_parser("verify", help="run invariant suites; exit 1 on any failure")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")

    k = sub.add_parser("backends", help="time the compiled and pure-Python scalar backends")
    k.add_argument("--repeats", type=int, default=5)
    k.add_argument("--warmup", type=int, default=1)
    k.add_argument("--rows", type=_rows, default="5,7")
    return parser


def cmd_bench(args):
    config = load_config(args.config) if args.config else BenchConfig()
    config = with_overrides(
        config,
        seed=args.seed,
        n_landmarks=args.n_landmarks,
        repeats=args.repeats,
        warmup=args.warmup,
        fd_value_step=args.fd_value_step,
        fd_grad_step=args.fd_grad_step,
    )
    rows = args.rows if isinstance(args.rows, tuple) else parse_rows(args.rows)
    report = build_report(config, rows, backend=args.backend)
    text = format_report(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args):
    failed = 0
    for name, checks in run_suites([args.suite]).items():
        print(f"[{name}]")
        for c in checks:
            print("  " + c.line())
            failed += not c.passed
    print(f"{failed} failing check(s)" if failed else "all checks passed")
    return 1 if failed else 0


def cmd_backends(args):
    rows = args.rows if isinstance(args.rows, tuple) else parse_rows(args.rows)
    config = BenchConfig(repeats=max(args.repeats, 3), warmup=args.warmup)
    result = compare_backends(config, rows)
    print(json.dumps(result, indent=2))
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return {"bench": cmd_bench, "verify": cmd_verify, "backends": cmd_backends}[
            args.command
        ](args)
    except (ValueError, OSError) as exc:
        print(f"se3ad: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

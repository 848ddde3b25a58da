"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 some run failed, 3 ``--verify``
found cells that disagree with the reference table.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict

from . import __version__
from .bench import (
    METHODS,
    BenchmarkCase,
    emit_report,
    run_cases,
    run_table2,
    sweep_p,
)
from .errors import RootFamilyError, ValidationError
from .golden import compare_table2
from .numeric import BENCH_PRECISION

EXIT_OK, EXIT_INVALID, EXIT_RUN_FAILED, EXIT_MISMATCH = 0, 1, 2, 3

CASE_FLAGS = {
    "function": "function",
    "m": "multiplicity",
    "x0": "x0",
    "alpha": "alpha",
    "p": "p_values",
    "iters": "iterations",
    "precision": "precision_bits",
    "method": "method",
}


def _add_case_flags(ap, with_p=True):
    ap.add_argument("--function", help="expression in x, or a built-in name f1..f4")
    ap.add_argument("--m", type=int, help="multiplicity of the sought zero")
    ap.add_argument("--x0", help="initial approximation, e.g. -1.7+0.8i")
    ap.add_argument("--alpha", help="known zero for error columns, or 'refine'")
    if with_p:
        ap.add_argument("--p", action="append", help="family parameter (repeatable)")
    ap.add_argument("--iters", type=int, help="number of fixed iterations (default 3)")
    ap.add_argument("--precision", type=int, help=f"working precision in bits (default {BENCH_PRECISION})")
    ap.add_argument("--method", choices=METHODS, help="iteration (default: the parametric family)")


def _add_output_flags(ap):
    ap.add_argument("--format", default="markdown", choices=("markdown", "csv", "json"))
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--timings", action="store_true", help="include wall-clock timings (json only)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rootfamily", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one case for one or more values of p")
    _add_case_flags(solve)
    solve.add_argument("--config", help="json file with a 'cases' list; flags override each case")
    _add_output_flags(solve)

    sweep = sub.add_parser("sweep", help="sweep p over an evenly spaced real grid")
    _add_case_flags(sweep, with_p=False)
    sweep.add_argument("--start", type=float, default=-2.0)
    sweep.add_argument("--stop", type=float, default=2.0)
    sweep.add_argument("--count", type=int, default=5)
    _add_output_flags(sweep)

    table = sub.add_parser("table2", help="rerun the reference error table")
    table.add_argument("--precision", type=int, default=BENCH_PRECISION)
    table.add_argument("--iters", type=int, default=3)
    table.add_argument("--verify", action="store_true", help="compare against the reference values")
    _add_output_flags(table)
    return ap


def _overrides(args) -> dict:
    out = {}
    for flag, fieldname in CASE_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            out[fieldname] = value
    return out


def load_cases(path: str, overrides: dict) -> list:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    entries = data["cases"] if isinstance(data, dict) else data
    defaults = asdict(BenchmarkCase(function=""))
    cases = []
    for entry in entries:
        unknown = set(entry) - set(defaults)
        if unknown:
            raise ValidationError(f"unknown case fields in {path}: {', '.join(sorted(unknown))}")
        cases.append(BenchmarkCase(**{**entry, **overrides}))
    return cases


def _emit(report, args):
    text = emit_report(report, args.format, args.out, include_timings=args.timings)
    if args.out is None:
        sys.stdout.write(text)


VALUE_FLAGS = ("--x0", "--alpha", "--p", "--function", "--start", "--stop")


def _attach_negative_values(argv):
    """Rewrite ``--x0 -1.7+0.8i`` as ``--x0=-1.7+0.8i``; argparse would read the value as an option."""
    out = []
    it = iter(argv)
    for arg in it:
        if arg in VALUE_FLAGS:
            value = next(it, None)
            if value is not None and value.startswith("-"):
                out.append(f"{arg}={value}")
                continue
            out.append(arg)
            if value is not None:
                out.append(value)
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_negative_values(argv))
    try:
        if args.command == "solve":
            overrides = _overrides(args)
            if args.config:
                cases = load_cases(args.config, overrides)
            else:
                if "function" not in overrides:
                    raise ValidationError("--function or --config is required")
                cases = [BenchmarkCase(**overrides)]
            cases = [c.resolved() for c in cases]
            report = run_cases(cases)
            _emit(report, args)
            return EXIT_RUN_FAILED if report.failed else EXIT_OK

        if args.command == "sweep":
            overrides = _overrides(args)
            if "function" not in overrides:
                raise ValidationError("--function is required")
            report = sweep_p(BenchmarkCase(**overrides), args.start, args.stop, args.count)
            _emit(report, args)
            best = report.cases[0].best_p
            print(f"best p on grid: {best}", file=sys.stderr)
            return EXIT_RUN_FAILED if report.failed else EXIT_OK

        if args.command == "table2":
            if args.iters < 1 or args.precision < 64:
                raise ValidationError("--iters must be >= 1 and --precision >= 64")
            report = run_table2(args.precision, args.iters)
            _emit(report, args)
            if report.failed:
                return EXIT_RUN_FAILED
            if args.verify:
                checks = compare_table2(report)
                bad = [c for c in checks if not c.ok]
                for c in bad:
                    print(c.line(), file=sys.stderr)
                print(f"verify: {len(checks) - len(bad)}/{len(checks)} cells match", file=sys.stderr)
                if bad:
                    return EXIT_MISMATCH
            return EXIT_OK
    except (RootFamilyError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

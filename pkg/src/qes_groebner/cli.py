"""Command-line interface: ``qes solve``, ``qes groebner`` and ``qes reproduce``.

Exit codes: 0 success, 1 usage or parse error, 2 verification failure or
corpus mismatch, 3 Groebner budget exceeded.
"""

from __future__ import annotations

import argparse
import sys

from .characterization import BranchSign, parity_guard
from .corpus import TABLES, reproduce_corpus
from .errors import (BudgetExceeded, InternalError, PreconditionError, UsageError,
                     VerificationError)
from .pipeline import parse_problem, parse_signs, run_case, run_pipeline
from .reports import to_json, to_markdown, to_table

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="qes", description="Liouvillian integrability and algebraic spectra "
                     "of Schroedinger operators with polynomial potentials.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="run every (sign, s) case of a problem file")
    solve.add_argument("file")
    solve.add_argument("--s-max", type=int, help="override s_max from the file")
    solve.add_argument("--sign", choices=["plus", "minus", "both"], help="override signs")
    solve.add_argument("--format", choices=["json", "md", "table"], default="json")
    solve.add_argument("--timing", action="store_true", help="record per-case wall time")
    solve.add_argument("--max-seconds", type=float, help="time budget per Groebner computation")
    solve.add_argument("-o", "--output", help="write the report here instead of stdout")

    gb = sub.add_parser("groebner", help="print the reduced Groebner basis of one case")
    gb.add_argument("file")
    gb.add_argument("--s", type=int, required=True)
    gb.add_argument("--sign", choices=["plus", "minus"], required=True)
    gb.add_argument("--max-seconds", type=float)

    rep = sub.add_parser("reproduce", help="recompute the built-in reference tables")
    rep.add_argument("--table", default="all", help=f"one of {', '.join(TABLES)} or all")
    return parser


def _write(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args):
    spec = parse_problem(args.file)
    if args.s_max is not None:
        if args.s_max < 0:
            raise UsageError("--s-max must be non-negative")
        spec.s_max = args.s_max
    if args.sign:
        spec.signs = parse_signs(args.sign)
    reports = run_pipeline(spec, timing=args.timing, max_seconds=args.max_seconds)
    if args.format == "json":
        text = to_json(spec, reports)
    elif args.format == "md":
        text = to_markdown(spec, reports)
    else:
        text = to_table(reports)
    _write(text, args.output)
    return EXIT_BUDGET if any(r.error for r in reports) else EXIT_OK


def cmd_groebner(args):
    spec = parse_problem(args.file)
    if args.s < 0:
        raise UsageError("--s must be non-negative")
    V = spec.potential_poly()
    guard = parity_guard(V)
    if guard.n is None:
        sys.stdout.write(f"# {guard.reason}\n1\n")
        return EXIT_OK
    if guard.n == 0:
        sys.stdout.write("# constant potential: no conditions on lambda\n")
        return EXIT_OK
    res = run_case(V, guard.n, BranchSign.parse(args.sign), args.s, spec.precision,
                   spec.tolerance, max_seconds=args.max_seconds)
    if res.report.error:
        print(f"qes: budget exceeded: {res.report.error}", file=sys.stderr)
        return EXIT_BUDGET
    if res.basis is None:
        sys.stdout.write(f"# quantization {res.report.quantization} has no solution\n1\n")
        return EXIT_OK
    sys.stdout.write(res.basis.dump())
    return EXIT_OK


def cmd_reproduce(args):
    report = reproduce_corpus(args.table)
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv=None):
    args = build_parser().parse_args(argv)
    handler = {"solve": cmd_solve, "groebner": cmd_groebner, "reproduce": cmd_reproduce}[args.command]
    try:
        return handler(args)
    except (UsageError, PreconditionError) as exc:
        print(f"qes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (VerificationError, InternalError) as exc:
        print(f"qes: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except BudgetExceeded as exc:
        print(f"qes: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

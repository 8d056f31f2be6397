"""Command-line surface.

Subcommands: oracle, series, exact, jensen, table. Exit codes: 0 success,
1 usage error, 2 domain/arithmetic error, 3 golden-table mismatch. Output is
deterministic for a fixed command line and FRACPART_DIGITS setting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import mpmath as mp

from fracpart import circle, goldens, jensen, oracle
from fracpart.numkernel import (
    DomainError,
    ParseError,
    Precision,
    parse_alpha,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_GOLDEN = 3

ENV_DIGITS = "FRACPART_DIGITS"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the exit-code contract
    # reserves 2 for domain errors, so route usage faults to status 1
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="fracpart", description=__doc__.splitlines()[0])
    p.add_argument("--digits", type=int, default=None,
                   help="working decimal digits (default: $%s or 60)" % ENV_DIGITS)
    p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("oracle", help="exact/high-precision p_alpha(0..N)")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("series", help="truncated series p_alpha(n; delta) with tail bound")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--n", type=int, required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--terms", type=int, help="m-term truncation via delta = 2 pi mu0/(m+1)")
    g.add_argument("--delta", help="explicit truncation parameter")

    sp = sub.add_parser("exact", help="exact rational p_alpha(n) for rational alpha")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--report-terms", action="store_true",
                    help="also print guaranteed (M) and stable (M*) term counts")

    sp = sub.add_parser("jensen", help="Jensen polynomial report at (alpha, d, n)")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("table", help="recompute a reference table and diff it")
    sp.add_argument("table_id", choices=goldens.TABLE_IDS)

    sp = sub.add_parser("threshold", help="empirical hyperbolicity threshold scan")
    sp.add_argument("--alpha", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--horizon", type=int, required=True)

    return p


def _precision(args) -> Precision:
    digits = args.digits
    if digits is None:
        digits = int(os.environ.get(ENV_DIGITS, "60"))
    return Precision(decimal_digits=digits)


def _cmd_oracle(args, out) -> int:
    prec = _precision(args)
    table = oracle.coeffs(parse_alpha(args.alpha), args.n, prec)
    if args.format == "json":
        out.write(table.to_json(prec.decimal_digits) + "\n")
    elif args.format == "csv":
        table.write_csv(out, prec.decimal_digits)
    else:
        for n in range(args.n + 1):
            out.write(table.value_str(n, prec.decimal_digits) + "\n")
    return EXIT_OK


def _cmd_series(args, out) -> int:
    prec = _precision(args)
    alpha = parse_alpha(args.alpha)
    if args.terms is not None:
        delta = circle.m_term_delta(alpha, args.terms, prec)
    else:
        with prec.ctx():
            delta = mp.mpf(args.delta)
    approx = circle.partial_series(alpha, args.n, delta, prec)
    if args.format == "json":
        out.write(approx.to_json(prec.decimal_digits) + "\n")
    elif args.format == "csv":
        out.write("value,delta,tail_bound,terms,precision\n")
        out.write("%s,%s,%s,%d,%d\n" % (
            mp.nstr(approx.value, prec.decimal_digits),
            mp.nstr(approx.delta, prec.decimal_digits),
            mp.nstr(approx.tail_bound, 10),
            approx.total_terms,
            prec.decimal_digits,
        ))
    else:
        out.write("value = %s\n" % mp.nstr(approx.value, prec.decimal_digits))
        out.write("delta = %s\n" % mp.nstr(approx.delta, prec.decimal_digits))
        out.write("tail_bound = %s\n" % mp.nstr(approx.tail_bound, 10))
        out.write("terms_per_m = %s (total %d)\n" % (list(approx.terms_per_m), approx.total_terms))
        out.write("precision = %d\n" % prec.decimal_digits)
    return EXIT_OK


def _cmd_exact(args, out) -> int:
    alpha = parse_alpha(args.alpha)
    if alpha.kind != "rational":
        raise DomainError("exact requires a rational alpha, got %r" % args.alpha)
    a = alpha.rational
    value = circle.exact_value(a.numerator, a.denominator, args.n)
    record = {"alpha": str(alpha), "n": args.n,
              "value": "%d/%d" % (value.numerator, value.denominator)}
    if args.report_terms:
        record["M"] = circle.guaranteed_terms(a.numerator, a.denominator, args.n)
        record["Mstar"] = circle.empirical_min_terms(a.numerator, a.denominator, args.n)
    if args.format == "json":
        out.write(json.dumps(record) + "\n")
    elif args.format == "csv":
        out.write(",".join(record.keys()) + "\n")
        out.write(",".join(str(v) for v in record.values()) + "\n")
    else:
        out.write("p = %s\n" % record["value"])
        if args.report_terms:
            out.write("M = %d\nM* = %d\n" % (record["M"], record["Mstar"]))
    return EXIT_OK


def _cmd_jensen(args, out) -> int:
    prec = _precision(args)
    alpha = parse_alpha(args.alpha)
    try:
        report = jensen.build_report(alpha, args.d, args.n, prec)
    except jensen.IndeterminateVerdict as exc:
        out.write("hyperbolic = indeterminate (%s)\n" % exc)
        return EXIT_OK
    if args.format == "json":
        out.write(report.to_json() + "\n")
    elif args.format == "csv":
        out.write("n,d,hyperbolic,gap_to_hermite\n")
        out.write("%d,%d,%s,%s\n" % (
            args.n, args.d, str(report.hyperbolic).lower(),
            mp.nstr(report.hermite_distance, 10)))
    else:
        out.write("raw = %s\n" % report.raw.render(digits=10))
        out.write("renormalized = %s\n" % report.renormalized.render(digits=10))
        out.write("hyperbolic = %s\n" % str(report.hyperbolic).lower())
        out.write("hermite_distance = %s\n" % mp.nstr(report.hermite_distance, 10))
    return EXIT_OK


def _cmd_table(args, out) -> int:
    artifact = goldens.compute_table(args.table_id)
    if args.format == "json":
        out.write(json.dumps({
            "table_id": artifact.table_id,
            "header": list(artifact.header),
            "rows": [list(r) for r in artifact.rows],
            "mismatches": [
                {"row": d.row, "column": d.column, "printed": d.printed,
                 "recomputed": d.recomputed}
                for d in artifact.mismatches
            ],
        }) + "\n")
    else:
        out.write(artifact.formatted() + "\n")
        out.write(artifact.diff_report() + "\n")
    return EXIT_GOLDEN if artifact.mismatches else EXIT_OK


def _cmd_threshold(args, out) -> int:
    prec = _precision(args)
    alpha = parse_alpha(args.alpha)
    n0 = jensen.hyperbolicity_threshold(alpha, args.d, args.horizon, prec)
    out.write("threshold = %s\n" % ("none" if n0 is None else n0))
    return EXIT_OK


_COMMANDS = {
    "oracle": _cmd_oracle,
    "series": _cmd_series,
    "exact": _cmd_exact,
    "jensen": _cmd_jensen,
    "table": _cmd_table,
    "threshold": _cmd_threshold,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, out)
    except (DomainError, ParseError, ArithmeticError, ValueError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

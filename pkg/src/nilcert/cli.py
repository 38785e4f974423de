"""Command-line interface: nilcert VERB FILE [options].

Exit codes: 0 success, 1 domain error (a mathematical precondition failed),
2 parse error (malformed input or arguments).
"""

from __future__ import annotations

import argparse
import decimal
import sys
from fractions import Fraction
from typing import Sequence, TextIO

from . import serialize as ser
from .certify import certify, verify_certificate
from .cohomology import betti_numbers, top_action
from .errors import DomainError, NilcertError, ParseError
from .exact.algebraic import AlgebraicReal
from .exact.quad import QuadExt
from .foliation import (PeriodReport, heisenberg_example, period_from_holonomy, period_from_value,
                        torus_example, width_digits)
from .liealg import LieAutomorphism, is_unimodular, lower_central_series

VERBS = ("validate", "cohomology", "certify", "torus", "heisenberg", "period")


def _width_str(w: Fraction) -> str:
    d = width_digits(w)
    return f"1e-{d}" if Fraction(1, 10**d) == w else ser.rational_to_literal(w)


def _scalar_str(x) -> str:
    if isinstance(x, QuadExt):
        x = AlgebraicReal.from_quad(x)
    if isinstance(x, AlgebraicReal):
        return x.closed_form()
    if isinstance(x, Fraction):
        return ser.rational_to_literal(x)
    return str(x)


def _parse_precision(text: str) -> Fraction:
    try:
        w = Fraction(decimal.Decimal(text))
    except (decimal.InvalidOperation, ValueError):
        raise ParseError(f"invalid precision {text!r}") from None
    if not 0 < w < 1:
        raise ParseError("precision must lie strictly between 0 and 1")
    return w


def _algebra_and_map(obj):
    if isinstance(obj, dict) and "dim" in obj:
        return ser.parse_algebra(obj), None
    g = ser.parse_algebra(ser._require(obj, "algebra"))
    f = ser.parse_matrix(obj["F"]) if "F" in obj else None
    return g, f


# --- text renderings ----------------------------------------------------------


def _cert_lines(cert, indent: str = "  ") -> list[str]:
    lines = [f"{indent}value: {cert.value.closed_form()}",
             f"{indent}minpoly: {cert.minpoly.format()}",
             f"{indent}depth: {cert.depth}"]
    for lv in cert.levels:
        lines.append(f"{indent}level {lv.path}: charpoly {lv.charpoly.format()}, "
                     f"eigenvalue {lv.eigenvalue.closed_form()} (minpoly {lv.eigenvalue.minpoly.format()})")
    return lines


def _report_text(r: PeriodReport) -> list[str]:
    p = r.period
    lines = [
        f"{r.kind}: {r.label}",
        f"  period: {p.closed_form}",
        f"  numeric: {p.numeric()} (interval width {_width_str(p.width)})",
        f"  e^period: {p.exp_period.closed_form()}",
        f"  e^period minpoly: {p.exp_period.minpoly.format()}",
        f"  top action A(f): {_scalar_str(r.top_action)}",
        f"  orientation: {r.orientation:+d}",
    ]
    if r.alpha_exponent is not None:
        lines.append(f"  e^period = alpha^{r.alpha_exponent}")
    if r.paper_comparison is not None:
        c = r.paper_comparison
        lines.append(f"  comparison: stated {c.stated}, computed {c.computed}, {'match' if c.match else 'mismatch'}"
                     + (f" ({c.note})" if c.note else ""))
    lines.append("  checks:")
    lines.extend(f"    {k}: {v}" for k, v in r.checks)
    lines.append("  certificate:")
    lines.extend(_cert_lines(r.certificate, "    "))
    return lines


# --- verbs --------------------------------------------------------------------


def cmd_validate(obj, args) -> tuple[int, object, list[str]]:
    g, _ = _algebra_and_map(obj)
    v = g.validate()
    if v is not None:
        raise DomainError(f"invalid Lie algebra: {v}")
    chain, nil, rank = lower_central_series(g)
    uni = is_unimodular(g)
    data = {"valid": True, "dim": g.dim, "nilpotent": nil, "rank": rank if nil else None,
            "lower_central_dims": list(chain.dims), "unimodular": uni}
    text = [f"ok: valid Lie algebra of dimension {g.dim}",
            f"lower central series dims: {' '.join(map(str, chain.dims))}",
            f"nilpotent: {'yes (rank ' + str(rank) + ')' if nil else 'no'}",
            f"unimodular: {'yes' if uni else 'no'}"]
    return 0, data, text


def cmd_cohomology(obj, args):
    g, f = _algebra_and_map(obj)
    g.require_valid()
    b = betti_numbers(g)
    data = {"dim": g.dim, "betti": list(b)}
    text = [f"betti: {' '.join(map(str, b))}"]
    if f is not None:
        t = top_action(LieAutomorphism(g, f)).value
        data["top_action"] = ser.scalar_to_literal(t)
        text.append(f"top action (pullback): {_scalar_str(t)}")
    return 0, data, text


def cmd_certify(obj, args):
    prob, strict = ser.parse_problem(obj)
    cert = certify(prob, strict=strict)
    bad = verify_certificate(cert, prob)
    data = {"certificate": ser.certificate_to_dict(cert), "verified": bad is None,
            "violation": None if bad is None else str(bad)}
    text = ["certificate:"] + _cert_lines(cert) + [f"verified: {'ok' if bad is None else bad}"]
    return (0 if bad is None else 1), data, text


def cmd_torus(obj, args):
    a = ser.parse_torus(obj)
    reports = torus_example(a, args.orientation, args.precision)
    data = {"reports": [ser.report_to_dict(r) for r in reports]}
    text = []
    for i, r in enumerate(reports):
        if i:
            text.append("")
        text.extend(_report_text(r))
    return 0, data, text


def cmd_heisenberg(obj, args):
    p, alpha, m = ser.parse_heisenberg(obj)
    variant = None if args.variant == "auto" else args.variant
    r = heisenberg_example(p, alpha, m, variant, args.orientation, args.precision)
    return 0, {"reports": [ser.report_to_dict(r)]}, _report_text(r)


def cmd_period(obj, args):
    if isinstance(obj, dict) and "algebra" in obj:
        g, f = _algebra_and_map(obj)
        if f is None:
            raise ParseError("period input needs 'F'")
        g.require_valid()
        aut = LieAutomorphism(g, f)
        top = top_action(aut).value
        pv = period_from_holonomy(g, aut, args.orientation, args.precision)
    else:
        prob, strict = ser.parse_problem(obj)
        cert = certify(prob, strict=strict)
        top = cert.value
        pv = period_from_value(cert.value, args.orientation, args.precision)
    data = {"top_action": ser._opt_scalar(top), "orientation": args.orientation, "period": ser.period_to_dict(pv)}
    text = [f"top action A(f): {_scalar_str(top)}",
            f"period: {pv.closed_form}",
            f"numeric: {pv.numeric()} (interval width {_width_str(pv.width)})"]
    return 0, data, text


COMMANDS = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "certify": cmd_certify,
    "torus": cmd_torus,
    "heisenberg": cmd_heisenberg,
    "period": cmd_period,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilcert", description="Exact Lie algebra cohomology and algebraic period certificates.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("input", help="JSON input file")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--orientation", type=int, choices=(1, -1), default=1)
    parser.add_argument("--variant", choices=("auto", "printed", "halved"), default="auto",
                        help="quadratic-term variant of the two-step example map")
    parser.add_argument("--precision", default="1e-12", help="interval width for numeric renderings")
    return parser


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    try:
        args = build_parser().parse_args(list(argv))
        args.precision = _parse_precision(args.precision)
        obj = ser.load_json(args.input)
        code, data, text = COMMANDS[args.verb](obj, args)
    except ParseError as e:
        print(f"parse error: {e}", file=err)
        return 2
    except (DomainError, NilcertError) as e:
        print(f"domain error: {e}", file=err)
        return 1
    if args.format == "json":
        out.write(ser.dumps(data))
    else:
        out.write("\n".join(text) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())

"""Exact literals, input file formats and JSON report encoding.

Literal grammar: rationals are JSON integers or strings "n" / "n/d" with
d > 0 in lowest terms; elements of Q(sqrt(p)) are records {"a", "b", "p"};
polynomials are coefficient arrays, lowest degree first; matrices are
nested arrays of literals.
"""

from __future__ import annotations

import decimal
import json
import re
from fractions import Fraction
from typing import Any

from .certify import AlgebraicityCertificate, LatticeAutomorphismProblem, Level
from .errors import NilcertError, ParseError
from .exact.algebraic import AlgebraicReal
from .exact.poly import UniPoly
from .exact.quad import QuadExt, is_squarefree
from .foliation import PaperComparison, PeriodReport, PeriodValue
from .liealg import LieAlgebra
from .linalg import IntLattice, Matrix

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


# --- scalars ------------------------------------------------------------------


def rational_to_literal(r: Fraction) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def parse_rational(obj: Any) -> Fraction:
    if isinstance(obj, bool):
        raise ParseError(f"expected a rational literal, got {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        m = _RATIONAL.match(obj.strip())
        if not m:
            raise ParseError(f"malformed rational literal {obj!r}")
        num = int(m.group(1))
        if m.group(2) is None:
            return Fraction(num)
        den = int(m.group(2))
        if den == 0:
            raise ParseError(f"zero denominator in {obj!r}")
        r = Fraction(num, den)
        if r.denominator != den:
            raise ParseError(f"rational literal {obj!r} is not in lowest terms")
        return r
    raise ParseError(f"expected a rational literal, got {obj!r}")


def scalar_to_literal(x) -> Any:
    if isinstance(x, QuadExt):
        if x.b == 0:
            return rational_to_literal(x.a)
        return {"a": rational_to_literal(x.a), "b": rational_to_literal(x.b), "p": x.p}
    return rational_to_literal(x)


def parse_scalar(obj: Any):
    if isinstance(obj, dict):
        try:
            a, b, p = obj["a"], obj["b"], obj["p"]
        except KeyError as e:
            raise ParseError(f"quadratic literal missing field {e}") from None
        if not isinstance(p, int) or isinstance(p, bool) or p < 2 or not is_squarefree(p):
            raise ParseError(f"quadratic literal needs a squarefree integer p > 1, got {p!r}")
        return QuadExt(parse_rational(a), parse_rational(b), p)
    return parse_rational(obj)


def poly_to_literal(f: UniPoly) -> list:
    return [rational_to_literal(c) for c in f.coeffs]


def parse_poly(obj: Any) -> UniPoly:
    if not isinstance(obj, list):
        raise ParseError("polynomial must be a coefficient array")
    return UniPoly(parse_rational(c) for c in obj)


def matrix_to_literal(m: Matrix) -> list:
    return [[scalar_to_literal(x) for x in row] for row in m.tolist()]


def parse_matrix(obj: Any, cols: int | None = None) -> Matrix:
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise ParseError("matrix must be an array of rows")
    rows = [[parse_scalar(x) for x in r] for r in obj]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise ParseError("matrix rows have different lengths")
    width = widths.pop() if widths else (cols or 0)
    return Matrix(rows, width)


def algebraic_to_literal(x: AlgebraicReal) -> dict:
    return {"minpoly": poly_to_literal(x.minpoly), "interval": [rational_to_literal(x.lo), rational_to_literal(x.hi)]}


def parse_algebraic(obj: Any) -> AlgebraicReal:
    if not isinstance(obj, dict) or "minpoly" not in obj or "interval" not in obj:
        raise ParseError("algebraic literal needs 'minpoly' and 'interval'")
    lo, hi = (parse_rational(v) for v in obj["interval"])
    try:
        return AlgebraicReal(parse_poly(obj["minpoly"]), lo, hi)
    except (NilcertError, ValueError) as e:
        raise ParseError(f"invalid algebraic literal: {e}") from None


# --- input files --------------------------------------------------------------


def _require(obj: dict, key: str):
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object")
    if key not in obj:
        raise ParseError(f"missing field {key!r}")
    return obj[key]


def _int(obj: Any, what: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ParseError(f"{what} must be an integer, got {obj!r}")
    return obj


def parse_field(obj: Any) -> int | None:
    if obj is None or obj == "Q":
        return None
    if isinstance(obj, dict) and "quad" in obj:
        p = _int(obj["quad"], "quad field p")
        if p < 2 or not is_squarefree(p):
            raise ParseError(f"quad field needs a squarefree p > 1, got {p}")
        return p
    raise ParseError(f"unknown field {obj!r}")


def parse_algebra(obj: Any) -> LieAlgebra:
    """{"dim", "field", "brackets": [{"i", "j", "coeffs"}]}; indices are 0-based."""
    dim = _int(_require(obj, "dim"), "dim")
    if dim < 0:
        raise ParseError("dim must be non-negative")
    fld = parse_field(obj.get("field", "Q"))
    brackets = {}
    for entry in obj.get("brackets", []):
        i = _int(_require(entry, "i"), "bracket index i")
        j = _int(_require(entry, "j"), "bracket index j")
        if not (0 <= i < dim and 0 <= j < dim):
            raise ParseError(f"bracket index ({i}, {j}) out of range for dim {dim}")
        coeffs = _require(entry, "coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != dim:
            raise ParseError(f"bracket ({i}, {j}) needs {dim} coefficients")
        if (i, j) in brackets:
            raise ParseError(f"bracket ({i}, {j}) listed twice")
        brackets[(i, j)] = [parse_scalar(c) for c in coeffs]
    return LieAlgebra.from_brackets(dim, brackets, fld)


def algebra_to_literal(g: LieAlgebra) -> dict:
    entries = []
    for i in range(g.dim):
        for j in range(g.dim):
            if i < j or any(g.c[i][j][k] != -g.c[j][i][k] for k in range(g.dim)):
                if any(x != 0 for x in g.c[i][j]):
                    entries.append({"i": i, "j": j, "coeffs": [scalar_to_literal(x) for x in g.c[i][j]]})
    return {"dim": g.dim, "field": "Q" if g.field is None else {"quad": g.field}, "brackets": entries}


def parse_problem(obj: Any) -> tuple[LatticeAutomorphismProblem, bool]:
    """{"h", "F", "proj"?, "g"?, "lattice"?, "strict"?}; defaults: g = h, proj = identity."""
    h = parse_algebra(_require(obj, "h"))
    F = parse_matrix(_require(obj, "F"))
    g = parse_algebra(obj["g"]) if "g" in obj else h
    proj = parse_matrix(obj["proj"], h.dim) if "proj" in obj else Matrix.identity(h.dim)
    lattice = None
    if "lattice" in obj:
        rows = parse_matrix(obj["lattice"], h.dim)
        if not rows.is_integer():
            raise ParseError("lattice basis must be integral")
        lattice = IntLattice(h.dim, rows)
    strict = obj.get("strict", True)
    if not isinstance(strict, bool):
        raise ParseError("strict must be a boolean")
    return LatticeAutomorphismProblem(h, F, proj, g, lattice), strict


def parse_torus(obj: Any) -> Matrix:
    a = parse_matrix(_require(obj, "A"))
    if not a.is_integer():
        raise ParseError("torus matrix must be integral")
    return a


def parse_heisenberg(obj: Any) -> tuple[int, tuple[int, int], tuple[tuple[int, int], tuple[int, int]]]:
    """{"p": int, "alpha": {"a", "b"}, "M": [[a', b'], [c', d']]}."""
    p = _int(_require(obj, "p"), "p")
    alpha = _require(obj, "alpha")
    a = _int(_require(alpha, "a"), "alpha.a")
    b = _int(_require(alpha, "b"), "alpha.b")
    m = _require(obj, "M")
    if not isinstance(m, list) or len(m) != 2 or any(not isinstance(r, list) or len(r) != 2 for r in m):
        raise ParseError("M must be a 2x2 integer array")
    mm = tuple(tuple(_int(x, "M entry") for x in r) for r in m)
    return p, (a, b), mm


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"input file {path!r} does not exist") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: invalid JSON ({e})") from None


# --- reports ------------------------------------------------------------------


def _opt_scalar(x):
    if x is None:
        return None
    if isinstance(x, AlgebraicReal):
        return {"algebraic": algebraic_to_literal(x)}
    return scalar_to_literal(x)


def _parse_opt_scalar(obj):
    if obj is None:
        return None
    if isinstance(obj, dict) and "algebraic" in obj:
        return parse_algebraic(obj["algebraic"])
    return parse_scalar(obj)


def certificate_to_dict(c: AlgebraicityCertificate) -> dict:
    out = {
        "tag": c.tag,
        "path": c.path,
        "depth": c.depth,
        "value": algebraic_to_literal(c.value),
        "value_closed_form": c.value.closed_form(),
        "minpoly": poly_to_literal(c.minpoly),
        "exact": _opt_scalar(c.exact),
        "levels": [
            {
                "path": lv.path,
                "tag": lv.tag,
                "matrix": matrix_to_literal(lv.matrix),
                "charpoly": poly_to_literal(lv.charpoly),
                "eigenvalue": algebraic_to_literal(lv.eigenvalue),
                "exact": _opt_scalar(lv.exact),
            }
            for lv in c.levels
        ],
        "derived": certificate_to_dict(c.derived) if c.derived else None,
        "abelianization": certificate_to_dict(c.abelianization) if c.abelianization else None,
    }
    return out


def certificate_from_dict(d: dict) -> AlgebraicityCertificate:
    levels = tuple(
        Level(lv["path"], lv["tag"], parse_matrix(lv["matrix"]), parse_poly(lv["charpoly"]),
              parse_algebraic(lv["eigenvalue"]), _parse_opt_scalar(lv["exact"]))
        for lv in d["levels"]
    )
    return AlgebraicityCertificate(
        d["tag"], d["path"], parse_algebraic(d["value"]), parse_poly(d["minpoly"]), levels,
        _parse_opt_scalar(d["exact"]),
        certificate_from_dict(d["derived"]) if d.get("derived") else None,
        certificate_from_dict(d["abelianization"]) if d.get("abelianization") else None,
        d["depth"],
    )


def period_to_dict(p: PeriodValue) -> dict:
    return {
        "exp_period": algebraic_to_literal(p.exp_period),
        "closed_form": p.closed_form,
        "numeric": p.numeric(),
        "enclosure": [str(p.lo), str(p.hi)],
        "width": rational_to_literal(p.width),
    }


def period_from_dict(d: dict) -> PeriodValue:
    lo, hi = (decimal.Decimal(v) for v in d["enclosure"])
    return PeriodValue(parse_algebraic(d["exp_period"]), lo, hi, parse_rational(d["width"]))


def report_to_dict(r: PeriodReport) -> dict:
    cmp = r.paper_comparison
    return {
        "kind": r.kind,
        "label": r.label,
        "orientation": r.orientation,
        "period": period_to_dict(r.period),
        "top_action": _opt_scalar(r.top_action),
        "alpha_exponent": r.alpha_exponent,
        "eigenvalue": algebraic_to_literal(r.eigenvalue) if r.eigenvalue is not None else None,
        "checks": [[k, v] for k, v in r.checks],
        "paper_comparison": None if cmp is None else {
            "stated": cmp.stated, "stated_exponent": cmp.stated_exponent,
            "computed": cmp.computed, "match": cmp.match, "note": cmp.note,
        },
        "certificate": certificate_to_dict(r.certificate),
    }


def report_from_dict(d: dict) -> PeriodReport:
    cmp = d.get("paper_comparison")
    return PeriodReport(
        d["kind"], d["label"], period_from_dict(d["period"]), d["orientation"],
        _parse_opt_scalar(d["top_action"]), certificate_from_dict(d["certificate"]),
        tuple((k, v) for k, v in d["checks"]),
        None if cmp is None else PaperComparison(cmp["stated"], cmp["stated_exponent"], cmp["computed"], cmp["match"], cmp["note"]),
        d["alpha_exponent"],
        parse_algebraic(d["eigenvalue"]) if d.get("eigenvalue") is not None else None,
    )


def dumps(obj: Any) -> str:
    """Byte-stable JSON: fixed key order as constructed, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, ensure_ascii=True) + "\n"

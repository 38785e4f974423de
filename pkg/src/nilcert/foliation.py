"""Periods of the basic class for mapping-torus foliations.

For a mapping torus of f, the period along the base circle is the log of the
holonomy action on the one-dimensional top basic cohomology. The holonomy
acts by the inverse of the pullback scalar A(f) = det(F_g), so

    period = orientation * log |A(f)|^-1,   e^period = |A(f)|^-orientation.

orientation = +1 is the convention under which the 2-torus example with
A = [[2, 1], [1, 1]] has period log((3 - sqrt(5))/2). The absolute value
covers orientation-reversing holonomy, where the top class changes sign.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .certify import (AlgebraicityCertificate, LatticeAutomorphismProblem, Level, certify,
                      verify_certificate)
from .cohomology import top_action
from .errors import DomainError, LatticeError, NoQualifyingEigenvalue
from .exact.algebraic import DEFAULT_WIDTH, AlgebraicReal, log_interval
from .exact.factor import factor
from .exact.quad import QuadExt, squarefree_decomposition
from .exact.roots import isolate_real_roots
from .liealg import LieAlgebra, LieAutomorphism, is_unimodular
from .linalg import IntLattice, Matrix, char_poly, compound, rank_kernel
from .nilgroup import (HeisenbergLattice, HeisenbergMap, HeisenbergPoint, closure_lie_algebra,
                       homomorphism_check, preserves_lattice, validate_parameters)

VARIANTS = ("printed", "halved")


@dataclass(frozen=True)
class MappingTorusSpec:
    kind: str                                  # "torus" | "heisenberg"
    A: Matrix | None = None
    p: int | None = None
    alpha: tuple[int, int] | None = None       # alpha = a + b sqrt(p)
    M: tuple[tuple[int, int], tuple[int, int]] | None = None

    def __post_init__(self):
        if self.kind == "torus":
            if self.A is None or not self.A.is_square() or not self.A.is_integer():
                raise DomainError("torus spec needs a square integer matrix A")
            if self.A.det() not in (1, -1):
                raise DomainError(f"det A = {self.A.det()} must be +-1")
        elif self.kind == "heisenberg":
            if self.p is None or self.alpha is None or self.M is None:
                raise DomainError("heisenberg spec needs p, alpha and M")
            validate_parameters(self.p, self.alpha[0], self.alpha[1], self.M)
        else:
            raise DomainError(f"unknown mapping torus kind {self.kind!r}")


def width_digits(width) -> int:
    """Number of decimals d with 10^-d <= width."""
    width = Fraction(width)
    d = 0
    while Fraction(1, 10**d) > width:
        d += 1
    return d


@dataclass(frozen=True)
class PeriodValue:
    exp_period: AlgebraicReal
    lo: decimal.Decimal
    hi: decimal.Decimal
    width: Fraction

    def numeric(self, digits: int | None = None) -> str:
        """Midpoint rounded to the digits implied by the width (default 12)."""
        if digits is None:
            digits = width_digits(self.width)
        ctx = decimal.Context(prec=max(self.lo.adjusted(), self.hi.adjusted(), 0) + digits + 20)
        mid = ctx.divide(ctx.add(self.lo, self.hi), 2)
        return format(mid.quantize(decimal.Decimal(10) ** -digits, rounding=decimal.ROUND_HALF_EVEN, context=ctx), "f")

    @property
    def closed_form(self) -> str:
        return f"log({self.exp_period.closed_form()})"


@dataclass(frozen=True)
class PaperComparison:
    stated: str
    stated_exponent: int | None
    computed: str
    match: bool
    note: str = ""


@dataclass(frozen=True)
class PeriodReport:
    kind: str
    label: str
    period: PeriodValue
    orientation: int
    top_action: object                      # exact pullback scalar (Fraction or QuadExt) or AlgebraicReal
    certificate: AlgebraicityCertificate
    checks: tuple[tuple[str, str], ...]
    paper_comparison: PaperComparison | None = None
    alpha_exponent: int | None = None
    eigenvalue: AlgebraicReal | None = None

    def check(self, name: str) -> str | None:
        return dict(self.checks).get(name)


def _to_algebraic(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    if isinstance(x, QuadExt):
        return AlgebraicReal.from_quad(x)
    return AlgebraicReal.from_rational(x)


def _check_orientation(orientation: int) -> None:
    if orientation not in (1, -1):
        raise DomainError(f"orientation must be +1 or -1, got {orientation}")


def period_from_value(value, orientation: int = 1, width=DEFAULT_WIDTH) -> PeriodValue:
    """e^period = |value|^-orientation and an enclosure of the period."""
    _check_orientation(orientation)
    v = _to_algebraic(value)
    if v.sign() == 0:
        raise DomainError("top action scalar must be nonzero")
    if v.sign() < 0:
        v = -v
    e = v.reciprocal() if orientation == 1 else v
    # enclose well below the rendering width so rounding the midpoint is safe
    lo, hi = log_interval(e, Fraction(width) / 10**6)
    return PeriodValue(e, lo, hi, Fraction(width))


def period_from_holonomy(g: LieAlgebra, f: LieAutomorphism, orientation: int = 1,
                         width=DEFAULT_WIDTH) -> PeriodValue:
    """Period for holonomy f acting on a unimodular structure algebra g."""
    return period_from_value(top_action(f).value, orientation, width)


# --- torus example ------------------------------------------------------------


REFERENCE_TORUS = Matrix([[2, 1], [1, 1]])
REFERENCE_TORUS_LAMBDA = QuadExt(Fraction(3, 2), Fraction(-1, 2), 5)


def _quadratic_root(cp_coeffs, root: AlgebraicReal) -> QuadExt:
    """The root of x^2 + c1 x + c0 matching the isolated real root, in Q(sqrt(d))."""
    c0, c1 = cp_coeffs[0], cp_coeffs[1]
    disc = c1 * c1 - 4 * c0
    num = disc.numerator * disc.denominator
    s, d = squarefree_decomposition(int(num))
    # sqrt(disc) = s sqrt(d) / denominator
    half = Fraction(s, 2 * disc.denominator)
    for sign in (1, -1):
        q = QuadExt(-c1 / 2, sign * half, d)
        if root == q:
            return q
    raise DomainError("failed to express the eigenvalue in a quadratic field")


def _left_eigenvector(a: Matrix, mu: QuadExt) -> tuple:
    n = a.rows
    shifted = a.T - Matrix.identity(n).scale(mu)
    _, ker = rank_kernel(shifted)
    if len(ker) != 1:
        raise DomainError("eigenvalue is not simple")
    v = ker[0]
    j = next(i for i, x in enumerate(v) if x != 0)
    return tuple(x / v[j] for x in v)


def _torus_reasons(a: Matrix) -> tuple[list[AlgebraicReal], list[str]]:
    n = a.rows
    qualifying, reasons = [], []
    for q, mult in factor(char_poly(a)):
        for lo, hi in isolate_real_roots(q):
            lam = AlgebraicReal(q, lo, hi)
            if lam.sign() <= 0:
                reasons.append(f"eigenvalue {lam} is not positive")
            elif q.degree < n:
                reasons.append(f"eigenvalue {lam} has minimal polynomial {q.format()} of degree {q.degree} < {n}")
            else:
                qualifying.append(lam)
    qualifying.sort()
    return qualifying, reasons


def torus_problem(a: Matrix, lam: QuadExt) -> LatticeAutomorphismProblem:
    """Linear foliation of T^2 along the lam-eigenline of A as a certify problem."""
    mu = a.det() / lam
    phi = _left_eigenvector(a, mu)
    return LatticeAutomorphismProblem(LieAlgebra.abelian(2), a, Matrix([list(phi)], 2), LieAlgebra.abelian(1))


def _eigenline_certificate(a: Matrix, lam: AlgebraicReal) -> AlgebraicityCertificate:
    """Base-case certificate for n >= 3: det(A)/lam is an eigenvalue of Lambda^(n-1) A."""
    n = a.rows
    fhat = compound(a, n - 1)
    cp = char_poly(fhat)
    mu = lam.reciprocal().scale(a.det())
    if not mu.minpoly.divides(cp):
        raise DomainError("eigenline value is not a root of the exterior power's characteristic polynomial")
    level = Level("root", "root", fhat, cp, mu, None)
    return AlgebraicityCertificate("root", "root", mu, mu.minpoly, (level,), None, depth=1)


def torus_example(a: Matrix, orientation: int = 1, width=DEFAULT_WIDTH) -> list[PeriodReport]:
    """One report per positive eigenvalue whose minimal polynomial has degree n."""
    spec = MappingTorusSpec("torus", A=a)
    n = a.rows
    det = a.det()
    qualifying, reasons = _torus_reasons(a)
    if not qualifying:
        detail = "; ".join(reasons) or "no real eigenvalues"
        raise NoQualifyingEigenvalue(f"no qualifying eigenvalue: {detail}")
    reports = []
    for lam in qualifying:
        checks = [("det_unit", "ok"), ("minpoly_degree_n", "ok"), ("lambda_positive", "ok")]
        if n == 2:
            lam_q = _quadratic_root(char_poly(a).coeffs, lam)
            prob = torus_problem(a, lam_q)
            assert prob.h.is_abelian()
            cert = certify(prob)
            bad = verify_certificate(cert, prob)
            top = top_action(LieAutomorphism(prob.g, prob.induced(), check=False)).value
        else:
            prob = None
            cert = _eigenline_certificate(a, lam)
            bad = verify_certificate(cert, None)
            top = cert.value
        checks.append(("structure_abelian", "ok"))
        checks.append(("unimodular", "ok" if is_unimodular(LieAlgebra.abelian(n - 1)) else "failed"))
        checks.append(("certificate", "ok" if bad is None else str(bad)))
        period = period_from_value(cert.value, orientation, width)
        comparison = None
        if a == REFERENCE_TORUS:
            expected = AlgebraicReal.from_quad(REFERENCE_TORUS_LAMBDA)
            computed = period.closed_form
            comparison = PaperComparison("log((3-sqrt(5))/2)", None, computed,
                                         orientation == 1 and period.exp_period == expected and lam == expected,
                                         "" if lam == expected else "conjugate eigenvalue; the stated value refers to the other one")
        reports.append(PeriodReport("torus", f"lambda = {lam}", period, orientation, top, cert,
                                    tuple(checks), comparison, None, lam))
    return reports


# --- Heisenberg example -------------------------------------------------------


def heisenberg_lattice_algebra(lattice: HeisenbergLattice) -> tuple[LieAlgebra, Matrix]:
    """Rational form of the Lie algebra carrying Gamma(p, k) as a lattice, with its projection.

    Basis (a1, a3, a2, a4, c1, c2) maps to (X, k sqrt(p) X, Y, k sqrt(p) Y,
    Z, k sqrt(p) Z). Brackets: [a1, a2] = c1, [a1, a4] = [a3, a2] = c2,
    [a3, a4] = k^2 p c1.
    """
    k2p = lattice.k * lattice.k * lattice.p
    z6 = (0,) * 6

    def e(i, s=1):
        return tuple(s if j == i else 0 for j in range(6))

    h = LieAlgebra.from_brackets(6, {
        (0, 2): e(4), (0, 3): e(5), (1, 2): e(5), (1, 3): e(4, k2p),
    })
    r = lattice.root
    p = lattice.p
    o, zq = QuadExt(1, 0, p), QuadExt(0, 0, p)
    proj = Matrix([
        [o, r, zq, zq, zq, zq],
        [zq, zq, o, r, zq, zq],
        [zq, zq, zq, zq, o, r],
    ])
    return h, proj


def _split6(lattice: HeisenbergLattice, coords) -> tuple:
    out = []
    for v in coords:
        s = lattice.split(v)
        if s is None:
            # not integral: keep exact rational split so the lattice check reports it
            v = v if isinstance(v, QuadExt) else QuadExt(v, 0, lattice.p)
            out.extend((v.a, v.b / lattice.k))
        else:
            out.extend((Fraction(s[0]), Fraction(s[1])))
    return tuple(out)


def heisenberg_problem(lattice: HeisenbergLattice, f: HeisenbergMap) -> LatticeAutomorphismProblem:
    """Lattice problem for f, built from the logs of f(A_i) and brackets for the centre."""
    h, proj = heisenberg_lattice_algebra(lattice)
    a1, a2, a3, a4 = lattice.generators()
    cols = {}
    for idx, g in ((0, a1), (1, a3), (2, a2), (3, a4)):
        x, y, w = f(g).log_coords()
        # log coordinates ordered as (a1, a3 | a2, a4 | c1, c2)
        cols[idx] = _split6(lattice, (x, y, w))
    cols[4] = h.bracket(cols[0], cols[2])
    cols[5] = h.bracket(cols[0], cols[3])
    F = Matrix.from_columns([cols[i] for i in range(6)], 6)
    return LatticeAutomorphismProblem(h, F, proj, LieAlgebra.heisenberg())


def alpha_exponent(alpha: QuadExt, value: AlgebraicReal, bound: int = 64) -> int | None:
    """m with |alpha|^m = value, by exact comparison; None if there is none within the bound."""
    base = AlgebraicReal.from_quad(alpha if alpha.sign() > 0 else -alpha)
    if base == 1:
        return 0 if value == 1 else None
    for m in range(0, bound + 1):
        for s in ((m,) if m == 0 else (m, -m)):
            q = (alpha if alpha.sign() > 0 else -alpha) ** s
            if AlgebraicReal.from_quad(q) == value:
                return s
    return None


def heisenberg_example(p: int, alpha: tuple[int, int], m: Sequence[Sequence[int]], variant: str | None = None,
                       orientation: int = 1, width=DEFAULT_WIDTH) -> PeriodReport:
    """End-to-end pipeline for the two-step example built from a unit alpha and M'."""
    _check_orientation(orientation)
    params = validate_parameters(p, alpha[0], alpha[1], m)
    lattice = HeisenbergLattice(p, params.k)
    checks: list[tuple[str, str]] = [("alpha_unit", f"ok (norm {params.alpha.norm()})"), ("k", str(params.k))]

    closure = closure_lie_algebra(lattice.group())
    checks.append(("dense", "ok" if closure.dense else f"failed (real dimension {closure.real_dim})"))
    if not closure.dense:
        raise DomainError("lattice generators are not dense")

    candidates = (variant,) if variant is not None else VARIANTS
    chosen = None
    failures = []
    for v in VARIANTS:
        f = HeisenbergMap.from_unit(params.alpha, params.m, v)
        hc = homomorphism_check(f)
        checks.append((f"homomorphism[{v}]", "ok" if hc is None else f"violated: {hc}"))
        if v not in candidates:
            continue
        if hc is not None:
            failures.append(f"{v}: not a homomorphism ({hc})")
            continue
        lc = preserves_lattice(f, lattice)
        checks.append((f"preserves_lattice[{v}]", "ok" if lc.preserved else f"failed: {lc.first_failure()}"))
        if not lc.preserved:
            failures.append(f"{v}: {lc.first_failure()}")
            continue
        if chosen is None:
            chosen = (v, f, lc)
    if chosen is None:
        if all("not a homomorphism" in x for x in failures):
            raise DomainError("f is not a homomorphism in any variant: " + "; ".join(failures))
        raise LatticeError("f does not preserve the lattice: " + "; ".join(failures))
    v, f, lc = chosen
    checks.append(("variant", v))
    for i, mem in enumerate(lc.forward):
        checks.append((f"f(A{i + 1})", "exponents " + " ".join(map(str, mem.exponents))))
    for i, mem in enumerate(lc.backward):
        checks.append((f"f^-1(A{i + 1})", "exponents " + " ".join(map(str, mem.exponents))))

    prob = heisenberg_problem(lattice, f)
    cert = certify(prob)
    bad = verify_certificate(cert, prob)
    checks.append(("certificate", "ok" if bad is None else str(bad)))
    g = prob.g
    checks.append(("unimodular", "ok" if is_unimodular(g) else "failed"))
    top = top_action(LieAutomorphism(g, prob.induced())).value

    jac = f.jacobian_det()
    checks.append(("jacobian_oracle", "ok" if AlgebraicReal.from_quad(jac) == cert.value else f"mismatch: {jac}"))

    period = period_from_value(cert.value, orientation, width)
    exponent = alpha_exponent(params.alpha, period.exp_period)
    stated = "log(alpha^3)"
    comparison = PaperComparison(stated, 3, f"log(alpha^{exponent})" if exponent is not None else period.closed_form,
                                 exponent == 3,
                                 "" if exponent == 3 else "top-degree form scales by alpha^4 under f; holonomy acts by the inverse")
    label = f"p = {p}, alpha = {params.alpha}, M' = {list(map(list, params.m))}"
    return PeriodReport("heisenberg", label, period, orientation, top, cert, tuple(checks), comparison, exponent, None)

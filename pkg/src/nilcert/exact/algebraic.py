"""Real algebraic numbers: integer minimal polynomial plus isolating interval."""

from __future__ import annotations

import decimal
from fractions import Fraction
from math import gcd

from ..errors import RootIsolationError
from .factor import factor
from .poly import UniPoly
from .quad import QuadExt, squarefree_decomposition
from .roots import count_roots_in, refine_root

DEFAULT_WIDTH = Fraction(1, 10**12)


class AlgebraicReal:
    """A real root of an irreducible integer polynomial, pinned by an interval.

    Invariants: ``minpoly`` is irreducible over Q, integer, content 1,
    positive leading coefficient; it has exactly one root in the closed
    interval ``[lo, hi]``. Rational values carry the degenerate interval
    ``lo == hi``; for degree >= 2 the endpoints are never roots.
    """

    __slots__ = ("minpoly", "lo", "hi")

    def __init__(self, minpoly: UniPoly, lo, hi, *, check: bool = True):
        lo, hi = Fraction(lo), Fraction(hi)
        minpoly = minpoly.primitive()
        if check:
            if minpoly.degree < 1:
                raise RootIsolationError("minimal polynomial must have degree >= 1")
            if lo > hi:
                raise RootIsolationError("empty interval")
            if count_roots_in(minpoly, lo, hi) != 1:
                raise RootIsolationError(f"{minpoly} does not have exactly one root in [{lo}, {hi}]")
        if minpoly.degree == 1:
            r = -minpoly[0] / minpoly[1]
            lo = hi = r
        object.__setattr__(self, "minpoly", minpoly)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraicReal is immutable")

    def __reduce__(self):
        return (AlgebraicReal, (self.minpoly, self.lo, self.hi))

    # constructors --------------------------------------------------------

    @classmethod
    def from_rational(cls, r) -> AlgebraicReal:
        r = Fraction(r)
        return cls(UniPoly((-r, 1)), r, r, check=False)

    @classmethod
    def from_quad(cls, q: QuadExt) -> AlgebraicReal:
        if q.b == 0:
            return cls.from_rational(q.a)
        mp = UniPoly((q.norm(), -2 * q.a, 1)).primitive()
        bits = 8
        while True:
            lo, hi = q.bounds(bits)
            if lo < hi and mp(lo) != 0 and mp(hi) != 0 and count_roots_in(mp, lo, hi) == 1:
                return cls(mp, lo, hi, check=False)
            bits *= 2

    # properties ----------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    def is_rational(self) -> bool:
        return self.minpoly.degree == 1

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.lo

    def refined(self, width=DEFAULT_WIDTH) -> AlgebraicReal:
        width = Fraction(width)
        if self.hi - self.lo <= width:
            return self
        lo, hi = refine_root(self.minpoly, self.lo, self.hi, width)
        return AlgebraicReal(self.minpoly, lo, hi, check=False)

    def approx(self, width=DEFAULT_WIDTH) -> tuple[Fraction, Fraction]:
        return self.refined(width).interval

    def sign(self) -> int:
        if self.is_rational():
            r = self.lo
            return (r > 0) - (r < 0)
        x = self
        while x.lo <= 0 <= x.hi:
            x = x.refined((x.hi - x.lo) / 4)
        return 1 if x.lo > 0 else -1

    def __float__(self):
        lo, hi = self.approx(Fraction(1, 2**60))
        return float((lo + hi) / 2)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.from_rational(other)
        elif isinstance(other, QuadExt):
            other = AlgebraicReal.from_quad(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return count_roots_in(self.minpoly, lo, hi) == 1

    def __hash__(self):
        return hash(self.minpoly)

    def __lt__(self, other: AlgebraicReal):
        if self == other:
            return False
        a, b = self, other
        while not (a.hi < b.lo or b.hi < a.lo):
            a = a.refined((a.hi - a.lo) / 4 or Fraction(1))
            b = b.refined((b.hi - b.lo) / 4 or Fraction(1))
        return a.hi < b.lo

    # arithmetic ----------------------------------------------------------

    def __neg__(self) -> AlgebraicReal:
        return AlgebraicReal(self.minpoly.negate_argument(), -self.hi, -self.lo, check=False)

    def reciprocal(self) -> AlgebraicReal:
        if self.is_rational():
            if self.lo == 0:
                raise ZeroDivisionError("reciprocal of zero")
            return AlgebraicReal.from_rational(1 / self.lo)
        x = self
        while x.lo <= 0 <= x.hi:
            x = x.refined((x.hi - x.lo) / 4)
        return AlgebraicReal(x.minpoly.reverse(), 1 / x.hi, 1 / x.lo, check=False)

    def scale(self, r) -> AlgebraicReal:
        """Product with a rational number."""
        r = Fraction(r)
        if r == 0:
            return AlgebraicReal.from_rational(0)
        if self.is_rational():
            return AlgebraicReal.from_rational(self.lo * r)
        mp = self.minpoly.scale_argument(1 / r)
        a, b = self.lo * r, self.hi * r
        return AlgebraicReal(mp, min(a, b), max(a, b), check=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, AlgebraicReal):
            return algebraic_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> AlgebraicReal:
        if n < 0:
            return self.reciprocal() ** (-n)
        result = AlgebraicReal.from_rational(1)
        base = self
        while n:
            if n & 1:
                result = algebraic_mul(result, base)
            n >>= 1
            if n:
                base = algebraic_mul(base, base)
        return result

    # rendering -----------------------------------------------------------

    def decimal_str(self, digits: int = 12) -> str:
        """Decimal rendering correct to the given number of fractional digits."""
        width = Fraction(1, 10 ** (digits + 2))
        lo, hi = self.approx(width)
        mid = (lo + hi) / 2
        return _fraction_to_decimal(mid, digits)

    def closed_form(self) -> str:
        """Readable form: rational, (a +- s*sqrt(d))/c for quadratics, else root-of text."""
        if self.is_rational():
            return _fmt_rational(self.lo)
        if self.degree == 2:
            c, b, a = (int(x) for x in self.minpoly.coeffs)
            disc = b * b - 4 * a * c
            s, d = squarefree_decomposition(disc)
            num, den = -b, 2 * a
            g = gcd(gcd(abs(num), s), den)
            num, s, den = num // g, s // g, den // g
            sign = "+" if self.sign_of_quadratic_branch() > 0 else "-"
            root = f"sqrt({d})" if s == 1 else f"{s}*sqrt({d})"
            head = f"{num}{sign}{root}" if num != 0 else (root if sign == "+" else f"-{root}")
            return head if den == 1 else f"({head})/{den}"
        return f"root of {self.minpoly} in [{self.lo}, {self.hi}]"

    def sign_of_quadratic_branch(self) -> int:
        """+1 if this is the larger root of its quadratic minpoly, else -1."""
        c, b, a = self.minpoly.coeffs
        centre = -b / (2 * a)
        return 1 if self.lo > centre else -1 if self.hi < centre else _branch_refine(self, centre)

    def __repr__(self):
        return f"AlgebraicReal({self.minpoly}, [{self.lo}, {self.hi}])"

    def __str__(self):
        return self.closed_form()


def _branch_refine(x: AlgebraicReal, centre: Fraction) -> int:
    while x.lo <= centre <= x.hi:
        x = x.refined((x.hi - x.lo) / 4)
    return 1 if x.lo > centre else -1


def _fmt_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _fraction_to_decimal(x: Fraction, digits: int) -> str:
    q = Fraction(round(x * 10**digits), 10**digits)
    sign = "-" if q < 0 else ""
    q = abs(q)
    whole = q.numerator // q.denominator
    frac = q - whole
    tail = str(int(frac * 10**digits)).rjust(digits, "0")
    return f"{sign}{whole}.{tail}" if digits > 0 else f"{sign}{whole}"


# --- minimal polynomials ------------------------------------------------------


def minimal_polynomial(f: UniPoly, interval) -> AlgebraicReal:
    """The irreducible factor of f vanishing at its unique root in [lo, hi].

    Raises if f has no root or several distinct roots in the closed interval.
    """
    lo, hi = (Fraction(v) for v in interval)
    if f.is_zero():
        raise RootIsolationError("zero polynomial has no isolated root")
    g = f.squarefree_part()
    n = count_roots_in(g, lo, hi)
    if n == 0:
        raise RootIsolationError(f"{f} has no real root in [{lo}, {hi}]")
    if n > 1:
        raise RootIsolationError(f"{f} has {n} distinct real roots in [{lo}, {hi}]")
    hits = [h for h, _ in factor(f) if count_roots_in(h, lo, hi) == 1]
    assert len(hits) == 1
    h = hits[0]
    if h.degree == 1:
        return AlgebraicReal.from_rational(-h[0] / h[1])
    # endpoints cannot be roots of an irreducible factor of degree >= 2
    return AlgebraicReal(h, lo, hi, check=False)


def _sylvester_det(p: list[Fraction], q: list[Fraction]) -> Fraction:
    """Resultant of two polynomials (coefficients lowest first) by Bareiss."""
    n, m = len(p) - 1, len(q) - 1
    size = n + m
    rows = []
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    from ..linalg import det_fraction_free
    return det_fraction_free(rows)


def product_resultant(p: UniPoly, q: UniPoly) -> UniPoly:
    """Polynomial whose roots are all products a*b with p(a) = 0 = q(b).

    Res_y(p(y), y^m q(t/y)) evaluated at deg(p)*deg(q)+1 integer points and
    interpolated. Requires q(0) != 0.
    """
    n, m = p.degree, q.degree
    if q[0] == 0:
        raise ValueError("q must not vanish at 0")
    pc = list(p.coeffs)
    N = n * m
    xs = list(range(N + 1))
    ys = []
    for t in xs:
        # y^m q(t/y) = sum_j q_j t^j y^(m-j)
        qt = [q[m - k] * Fraction(t) ** (m - k) for k in range(m + 1)]
        ys.append(_sylvester_det(pc, qt))
    return _interpolate(xs, ys)


def _interpolate(xs: list[int], ys: list[Fraction]) -> UniPoly:
    """Newton divided differences."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    result = UniPoly((coef[-1],))
    for i in range(n - 2, -1, -1):
        result = result * UniPoly((-xs[i], 1)) + coef[i]
    return result


def _interval_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    prods = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return min(prods), max(prods)


def algebraic_mul(x: AlgebraicReal, y: AlgebraicReal) -> AlgebraicReal:
    """Exact product; minimal polynomial by resultant elimination then re-isolation."""
    if x.is_rational():
        return y.scale(x.lo)
    if y.is_rational():
        return x.scale(y.lo)
    r = product_resultant(x.minpoly, y.minpoly)
    g = r.squarefree_part()
    a, b = x, y
    while True:
        lo, hi = _interval_mul(a.interval, b.interval)
        if count_roots_in(g, lo, hi) == 1:
            return minimal_polynomial(r, (lo, hi))
        a = a.refined((a.hi - a.lo) / 4)
        b = b.refined((b.hi - b.lo) / 4)


def log_interval(x: AlgebraicReal, width=DEFAULT_WIDTH, digits: int | None = None) -> tuple[decimal.Decimal, decimal.Decimal]:
    """Enclosure of log|x|, from an interval of |x| of relative width <= width."""
    width = Fraction(width)
    if digits is None:
        digits = 40
        while Fraction(1, 10 ** (digits - 10)) > width:
            digits += 10
    if x.sign() == 0:
        raise ValueError("log of zero")
    v = x if x.sign() > 0 else -x
    while v.lo <= 0:
        v = v.refined((v.hi - v.lo) / 4)
    v = v.refined(width * v.lo)
    ctx = decimal.Context(prec=digits + 10)
    # ln is correctly rounded to prec digits; pad to make the enclosure rigorous
    pad = decimal.Decimal(10) ** -(digits)
    lo = ctx.divide(decimal.Decimal(v.lo.numerator), decimal.Decimal(v.lo.denominator)).ln(ctx)
    hi = ctx.divide(decimal.Decimal(v.hi.numerator), decimal.Decimal(v.hi.denominator)).ln(ctx)
    return ctx.subtract(lo, pad), ctx.add(hi, pad)

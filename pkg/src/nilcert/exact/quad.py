"""Elements a + b*sqrt(p) of the real quadratic field Q(sqrt(p))."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, total_ordering
from math import isqrt
from numbers import Rational as _RationalABC

from ..errors import DomainError, FieldMismatch


@lru_cache(maxsize=None)
def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return (s, d) with n = s**2 * d and d squarefree (n > 0)."""
    if n <= 0:
        raise ValueError("n must be positive")
    s, d = 1, 1
    m = n
    q = 2
    while q * q <= m:
        while m % (q * q) == 0:
            s *= q
            m //= q * q
        if m % q == 0:
            d *= q
            m //= q
        q += 1
    return s, d * m


def sqrt_bounds(p: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(p) <= hi with hi - lo = 2**-bits."""
    scale = 1 << bits
    s = isqrt(p * scale * scale)
    return Fraction(s, scale), Fraction(s + 1, scale)


def _coerce_rational(x) -> Fraction | None:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)) and not isinstance(x, bool):
        return Fraction(x)
    return None


@total_ordering
class QuadExt:
    """Immutable a + b*sqrt(p) with a, b rational and p squarefree >= 2."""

    __slots__ = ("a", "b", "p")

    def __init__(self, a, b=0, p: int = 2):
        if not isinstance(p, int) or p < 2 or not is_squarefree(p):
            raise DomainError(f"p must be a squarefree integer >= 2, got {p!r}")
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExt is immutable")

    def __reduce__(self):
        return (QuadExt, (self.a, self.b, self.p))

    # coercion ------------------------------------------------------------

    def _other(self, other) -> QuadExt | None:
        if isinstance(other, QuadExt):
            if other.p != self.p:
                raise FieldMismatch(f"Q(sqrt({self.p})) vs Q(sqrt({other.p}))")
            return other
        r = _coerce_rational(other)
        if r is None:
            return None
        return QuadExt(r, 0, self.p)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.p)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.p)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuadExt(
            self.a * o.a + self.p * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.p,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.p)

    def norm(self) -> Fraction:
        return self.a * self.a - self.p * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(p))")
        return QuadExt(self.a / n, -self.b / n, self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExt(1, 0, self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.p == other.p and self.a == other.a and self.b == other.b
        r = _coerce_rational(other)
        if r is None:
            return NotImplemented
        return self.b == 0 and self.a == r

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.p))

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with p b^2
        diff = self.a * self.a - self.p * self.b * self.b
        return sa if diff > 0 else sb

    def __lt__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # conversions ---------------------------------------------------------

    def is_rational(self) -> bool:
        return self.b == 0

    def is_integral(self) -> bool:
        """True for elements of Z + Z*sqrt(p)."""
        return self.a.denominator == 1 and self.b.denominator == 1

    def bounds(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value."""
        if self.b == 0:
            return self.a, self.a
        lo, hi = sqrt_bounds(self.p, bits)
        u, v = self.a + self.b * lo, self.a + self.b * hi
        return (u, v) if u <= v else (v, u)

    def __float__(self):
        lo, hi = self.bounds(80)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, p={self.p})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.p})"
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = "-" + root
        else:
            tail = f"{self.b}*{root}"
        if self.a == 0:
            return tail
        sep = "" if tail.startswith("-") else "+"
        return f"{self.a}{sep}{tail}"


def quad_arith(x: QuadExt, y: QuadExt | None, op: str) -> QuadExt:
    """Dispatch form of the field operations: op in {'add', 'mul', 'inv'}."""
    if op == "inv":
        return x.inverse()
    if y is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if x.p != y.p:
        raise FieldMismatch(f"Q(sqrt({x.p})) vs Q(sqrt({y.p}))")
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def field_of(values) -> int | None:
    """Common p of a collection of scalars, or None when all are rational."""
    p = None
    for v in values:
        if isinstance(v, QuadExt):
            if p is None:
                p = v.p
            elif v.p != p:
                raise FieldMismatch(f"mixed fields Q(sqrt({p})) and Q(sqrt({v.p}))")
    return p

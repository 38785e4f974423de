"""Dense univariate polynomials over Q, coefficients lowest degree first."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence


def _trim(coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class UniPoly:
    """Immutable polynomial with Fraction coefficients.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _trim([Fraction(c) for c in coeffs]))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    def __reduce__(self):
        return (UniPoly, (self.coeffs,))

    @classmethod
    def x(cls) -> UniPoly:
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable) -> UniPoly:
        result = cls((1,))
        for r in roots:
            result = result * cls((-r, 1))
        return result

    # basic properties ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly((other,)).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # arithmetic ----------------------------------------------------------

    @staticmethod
    def _lift(other) -> UniPoly | None:
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(o.coeffs) + 1
        if dq <= 0:
            return UniPoly(), self
        quot = [Fraction(0)] * dq
        lc = o.lc
        for k in range(dq - 1, -1, -1):
            c = rem[k + len(o.coeffs) - 1] / lc
            quot[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quot), UniPoly(rem[: len(o.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: UniPoly) -> bool:
        return (other % self).is_zero()

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return UniPoly(c / self.lc for c in self.coeffs)

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __call__(self, x):
        """Horner evaluation; works for any ring element supporting + and *."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: UniPoly) -> UniPoly:
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def scale_argument(self, s) -> UniPoly:
        """Polynomial q with q(x) = self(s*x)."""
        s = Fraction(s)
        return UniPoly(c * s**i for i, c in enumerate(self.coeffs))

    def reverse(self) -> UniPoly:
        """x^deg * self(1/x); roots are the reciprocals (for nonzero roots)."""
        return UniPoly(reversed(self.coeffs))

    def negate_argument(self) -> UniPoly:
        return UniPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    # integer normal form -------------------------------------------------

    def primitive(self) -> UniPoly:
        """Integer coefficients, content 1, positive leading coefficient."""
        if self.is_zero():
            return self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return UniPoly(Fraction(i // g) for i in ints)

    def int_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def is_primitive_integer(self) -> bool:
        if self.is_zero():
            return False
        if any(c.denominator != 1 for c in self.coeffs):
            return False
        return self.lc > 0 and reduce(gcd, (int(c) for c in self.coeffs), 0) == 1

    def content_free_sign(self) -> UniPoly:
        """Divide by a positive rational so coefficients are coprime integers.

        Unlike :meth:`primitive` the sign of the polynomial is kept, which
        matters for Sturm sequences.
        """
        if self.is_zero():
            return self
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        return UniPoly(Fraction(i // g) for i in ints)

    # gcd / squarefree ----------------------------------------------------

    def gcd(self, other: UniPoly) -> UniPoly:
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).content_free_sign()
        return a.monic()

    def squarefree_part(self) -> UniPoly:
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.derivative())
        return (self // g).monic()

    def squarefree_factorization(self) -> list[tuple[UniPoly, int]]:
        """Yun's algorithm: [(a_i, i)] with self = lc * prod a_i^i, a_i monic squarefree."""
        f = self.monic()
        if f.degree <= 0:
            return []
        out = []
        fp = f.derivative()
        a = f.gcd(fp)
        b = f // a
        c = fp // a
        d = c - b.derivative()
        i = 1
        while b.degree > 0:
            a = b.gcd(d)
            b = b // a
            c = d // a
            d = c - b.derivative()
            if a.degree > 0:
                out.append((a, i))
            i += 1
        return out

    # formatting ----------------------------------------------------------

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        return self.format("x")

    def format(self, var: str = "x") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                body = mono if mag == 1 else f"{mag}{mono}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += sign + body
        return text


def poly_from_ints(coeffs: Sequence[int]) -> UniPoly:
    return UniPoly(coeffs)

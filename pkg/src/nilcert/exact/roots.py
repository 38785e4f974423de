"""Real root counting and isolation with Sturm sequences."""

from __future__ import annotations

from fractions import Fraction

from ..errors import RootIsolationError
from .poly import UniPoly


def sturm_sequence(f: UniPoly) -> list[UniPoly]:
    """Sturm chain of a nonzero polynomial, each member scaled by a positive rational."""
    if f.is_zero():
        raise RootIsolationError("Sturm sequence of the zero polynomial")
    seq = [f.content_free_sign(), f.derivative().content_free_sign()]
    while not seq[-1].is_zero():
        r = -(seq[-2] % seq[-1])
        seq.append(r.content_free_sign())
    seq.pop()
    return seq


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def variations_at(seq: list[UniPoly], x: Fraction) -> int:
    return _variations([_sign(p(x)) for p in seq])


def variations_at_infinity(seq: list[UniPoly], positive: bool) -> int:
    signs = []
    for p in seq:
        s = _sign(p.lc)
        if not positive and p.degree % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_distinct_real_roots(f: UniPoly) -> int:
    """Number of distinct real roots, from sign variations at -inf and +inf."""
    if f.degree <= 0:
        return 0
    seq = sturm_sequence(f)
    return variations_at_infinity(seq, False) - variations_at_infinity(seq, True)


def count_roots_in(f: UniPoly, lo, hi, seq: list[UniPoly] | None = None) -> int:
    """Distinct real roots of f in the closed interval [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        return 0
    if f.degree <= 0:
        return 0
    if lo == hi:
        return 1 if f(lo) == 0 else 0
    if seq is None:
        seq = sturm_sequence(f)
    # V(lo) - V(hi) counts roots in (lo, hi]
    n = variations_at(seq, lo) - variations_at(seq, hi)
    if f(lo) == 0:
        n += 1
    return n


def cauchy_bound(f: UniPoly) -> Fraction:
    """Strict bound: every root r has |r| < bound."""
    lc = abs(f.lc)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: UniPoly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals, one per distinct real root, in increasing order.

    Each returned pair (lo, hi) is either a degenerate interval lo == hi at
    a rational root, or satisfies lo < hi with f(lo) != 0 != f(hi) and
    exactly one root strictly inside.
    """
    if f.is_zero():
        raise RootIsolationError("cannot isolate roots of the zero polynomial")
    if f.degree <= 0:
        return []
    g = f.squarefree_part()
    seq = sturm_sequence(g)
    b = cauchy_bound(g)
    out: list[tuple[Fraction, Fraction]] = []

    def open_count(a: Fraction, c: Fraction, va: int, vc: int) -> int:
        # a and c are never roots when called
        return va - vc

    stack = [(-b, b, variations_at(seq, -b), variations_at(seq, b))]
    while stack:
        a, c, va, vc = stack.pop()
        n = open_count(a, c, va, vc)
        if n == 0:
            continue
        if n == 1:
            out.append((a, c))
            continue
        m = (a + c) / 2
        if g(m) == 0:
            out.append((m, m))
            # shrink both halves away from the exact root
            eps = (c - a) / 4
            left = m - eps
            right = m + eps
            while g(left) == 0 or count_roots_in(g, left, m, seq) > 1:
                eps /= 2
                left = m - eps
            while g(right) == 0 or count_roots_in(g, m, right, seq) > 1:
                eps /= 2
                right = m + eps
            stack.append((a, left, va, variations_at(seq, left)))
            stack.append((right, c, variations_at(seq, right), vc))
            # roots strictly inside (left, m) or (m, right) would be lost;
            # the loops above guarantee there are none besides m
            continue
        vm = variations_at(seq, m)
        stack.append((a, m, va, vm))
        stack.append((m, c, vm, vc))
    out.sort()
    return out


def refine_root(f: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Bisect an isolating interval of a simple root down to the given width.

    Requires f(lo) and f(hi) nonzero with opposite signs (true for an isolated
    root of a squarefree polynomial), or lo == hi.
    """
    if lo == hi:
        return lo, hi
    slo = _sign(f(lo))
    if slo == 0 or slo == _sign(f(hi)):
        raise RootIsolationError("interval does not bracket a simple root")
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = _sign(f(m))
        if sm == 0:
            return m, m
        if sm == slo:
            lo = m
        else:
            hi = m
    return lo, hi

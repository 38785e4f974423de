"""Factorization of polynomials over Q.

Zassenhaus: factor modulo a small prime (distinct-degree plus
Cantor-Zassenhaus equal-degree splitting), Hensel-lift the modular
factorization past the Mignotte bound, then recombine subsets.
Integer polynomials in this module are plain lists, lowest degree first.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import isqrt

from .poly import UniPoly

IntPoly = list


# --- arithmetic modulo a prime ----------------------------------------------


def _trim(a: IntPoly) -> IntPoly:
    while a and a[-1] == 0:
        a.pop()
    return a


def _mod(a: IntPoly, m: int) -> IntPoly:
    return _trim([c % m for c in a])


def _add(a: IntPoly, b: IntPoly, m: int) -> IntPoly:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _sub(a: IntPoly, b: IntPoly, m: int) -> IntPoly:
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % m for i in range(n)])


def _mul(a: IntPoly, b: IntPoly, m: int) -> IntPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % m for c in out])


def _divmod(a: IntPoly, b: IntPoly, p: int) -> tuple[IntPoly, IntPoly]:
    """Division modulo a prime p."""
    if not b:
        raise ZeroDivisionError
    rem = [c % p for c in a]
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(rem) - 1 < db:
        return [], _trim(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] * inv % p
        quot[k] = c
        if c:
            for j, y in enumerate(b):
                rem[k + j] = (rem[k + j] - c * y) % p
    return _trim(quot), _trim(rem[:db])


def _monic(a: IntPoly, p: int) -> IntPoly:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def _gcd(a: IntPoly, b: IntPoly, p: int) -> IntPoly:
    a, b = _mod(a, p), _mod(b, p)
    while b:
        a, b = b, _divmod(a, b, p)[1]
    return _monic(a, p)


def _xgcd(a: IntPoly, b: IntPoly, p: int) -> tuple[IntPoly, IntPoly, IntPoly]:
    """(g, s, t) with s*a + t*b = g monic modulo p."""
    r0, r1 = _mod(a, p), _mod(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1, p), p)
        t0, t1 = t1, _sub(t0, _mul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return ([c * inv % p for c in r0], [c * inv % p for c in s0], [c * inv % p for c in t0])


def _powmod(base: IntPoly, e: int, f: IntPoly, p: int) -> IntPoly:
    result = [1]
    base = _divmod(base, f, p)[1]
    while e:
        if e & 1:
            result = _divmod(_mul(result, base, p), f, p)[1]
        base = _divmod(_mul(base, base, p), f, p)[1]
        e >>= 1
    return result


def _derivative(a: IntPoly) -> IntPoly:
    return _trim([i * a[i] for i in range(1, len(a))])


def _distinct_degree(f: IntPoly, p: int) -> list[tuple[IntPoly, int]]:
    out = []
    h = [0, 1]
    rest = f
    d = 1
    while len(rest) - 1 >= 2 * d:
        h = _powmod(h, p, rest, p)
        g = _gcd(_sub(h, [0, 1], p), rest, p)
        if len(g) > 1:
            out.append((g, d))
            rest = _divmod(rest, g, p)[0]
            h = _divmod(h, rest, p)[1]
        d += 1
    if len(rest) > 1:
        out.append((_monic(rest, p), len(rest) - 1))
    return out


def _equal_degree(f: IntPoly, d: int, p: int, rng: random.Random) -> list[IntPoly]:
    n = len(f) - 1
    if n == d:
        return [f]
    e = (p**d - 1) // 2
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        g = _gcd(a, f, p)
        if 1 < len(g) < len(f):
            break
        b = _sub(_powmod(a, e, f, p), [1], p)
        g = _gcd(b, f, p)
        if 1 < len(g) < len(f):
            break
    other = _monic(_divmod(f, g, p)[0], p)
    return _equal_degree(g, d, p, rng) + _equal_degree(other, d, p, rng)


def factor_mod_p(f: IntPoly, p: int) -> list[IntPoly]:
    """Monic irreducible factors of a squarefree polynomial modulo an odd prime."""
    fm = _monic(_mod(f, p), p)
    rng = random.Random(p * 1000003 + len(f))
    out = []
    for g, d in _distinct_degree(fm, p):
        out.extend(_equal_degree(g, d, p, rng))
    out.sort()
    return out


# --- Hensel lifting ---------------------------------------------------------


def _int_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _lift_pair(f: IntPoly, u: IntPoly, w: IntPoly, p: int, a: int) -> tuple[IntPoly, IntPoly]:
    """Lift f = lc(f)*u*w (mod p), u and w monic and coprime, to modulus p**a."""
    lc = f[-1]
    lcinv = pow(lc % p, -1, p)
    g, s, t = _xgcd(u, w, p)
    assert g == [1], "Hensel factors not coprime"
    q = p
    for _ in range(1, a):
        prod = _int_mul(u, w)
        diff = [(f[i] if i < len(f) else 0) - lc * (prod[i] if i < len(prod) else 0)
                for i in range(max(len(f), len(prod)))]
        assert all(c % q == 0 for c in diff)
        e = _trim([(c // q) * lcinv % p for c in diff])
        if e:
            du = _divmod(_mul(e, t, p), u, p)[1]
            dw = _divmod(_sub(e, _mul(du, w, p), p), u, p)[0]
            u = [x + q * (du[i] if i < len(du) else 0) for i, x in enumerate(u)]
            w = [x + q * (dw[i] if i < len(dw) else 0) for i, x in enumerate(w)]
        q *= p
    return [c % q for c in u], [c % q for c in w]


def _prod_mod(polys: list[IntPoly], m: int) -> IntPoly:
    out = [1]
    for g in polys:
        out = _mul(out, g, m)
    return out


def hensel_lift(f: IntPoly, factors: list[IntPoly], p: int, a: int) -> list[IntPoly]:
    """Monic lifts modulo p**a of a modular factorization of f."""
    m = p**a
    if len(factors) == 1:
        inv = pow(f[-1] % m, -1, m)
        return [[c * inv % m for c in f]]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    u, w = _lift_pair(f, _prod_mod(left, p), _prod_mod(right, p), p, a)
    return hensel_lift(u, left, p, a) + hensel_lift(w, right, p, a)


# --- recombination ----------------------------------------------------------


def _symmetric(a: IntPoly, m: int) -> IntPoly:
    half = m // 2
    return _trim([c - m if c > half else c for c in (x % m for x in a)])


def _int_primitive(a: IntPoly) -> IntPoly:
    from math import gcd
    g = 0
    for c in a:
        g = gcd(g, c)
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _exact_quotient(f: IntPoly, g: IntPoly) -> IntPoly | None:
    q, r = divmod(UniPoly(f), UniPoly(g))
    if not r.is_zero():
        return None
    if any(c.denominator != 1 for c in q.coeffs):
        return None
    return [int(c) for c in q.coeffs]


def _good_primes(f: IntPoly, tries: int = 4) -> list[int]:
    out = []
    p = 3
    df = _derivative(f)
    while len(out) < tries:
        if all(p % d for d in range(2, isqrt(p) + 1)) and f[-1] % p:
            if len(_gcd(f, df, p)) == 1:
                out.append(p)
        p += 2
    return out


def factor_squarefree_primitive(f: IntPoly) -> list[IntPoly]:
    """Irreducible factors over Z of a squarefree primitive polynomial."""
    f = _trim(list(f))
    n = len(f) - 1
    if n <= 1:
        return [f]
    if f[0] == 0:
        rest = _int_primitive(f[1:])
        return [[0, 1]] + factor_squarefree_primitive(rest)

    best = None
    for p in _good_primes(f):
        facs = factor_mod_p(f, p)
        if best is None or len(facs) < len(best[1]):
            best = (p, facs)
        if len(facs) == 1:
            break
    p, modfacs = best
    if len(modfacs) == 1:
        return [f]

    norm2 = isqrt(sum(c * c for c in f)) + 1
    bound = 2 * abs(f[-1]) * (2**n) * norm2
    a = 1
    while p**a <= bound:
        a += 1
    m = p**a
    lifted = hensel_lift(f, modfacs, p, a)

    found = []
    rest = f
    pool = list(range(len(lifted)))
    s = 1
    while 2 * s <= len(pool):
        hit = False
        for subset in combinations(pool, s):
            lc = rest[-1]
            cand = [lc % m]
            for i in subset:
                cand = _mul(cand, lifted[i], m)
            cand = _symmetric(cand, m)
            if not cand or len(cand) < 2:
                continue
            cand = _int_primitive(cand)
            q = _exact_quotient(rest, cand)
            if q is not None:
                found.append(cand)
                rest = q
                pool = [i for i in pool if i not in subset]
                hit = True
                break
        if not hit:
            s += 1
    if len(rest) > 1:
        found.append(_int_primitive(rest))
    return found


def factor(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Irreducible factorization over Q: [(primitive factor, multiplicity)].

    Factors are integer, content 1, positive leading coefficient, sorted by
    degree and then coefficients. Constants are dropped.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    out = []
    for part, mult in f.squarefree_factorization():
        ints = part.primitive().int_coeffs()
        for g in factor_squarefree_primitive(ints):
            out.append((UniPoly(g).primitive(), mult))
    out.sort(key=lambda t: (t[0].degree, [int(c) for c in t[0].coeffs], t[1]))
    return out


def is_irreducible(f: UniPoly) -> bool:
    if f.degree < 1:
        return False
    facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1

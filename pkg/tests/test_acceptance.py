"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the terminal summary."""

import functools
import io
import json
import random
import time
from fractions import Fraction
from itertools import combinations, permutations
from math import comb
from pathlib import Path

import mpmath
import numpy as np
import sympy

from conftest import ACCEPTANCE_RESULTS
from nilcert import serialize as ser
from nilcert.certify import certify, verify_certificate
from nilcert.cli import run
from nilcert.cohomology import betti_numbers, build_complex, top_action
from nilcert.exact.algebraic import AlgebraicReal, algebraic_mul, minimal_polynomial
from nilcert.exact.factor import is_irreducible
from nilcert.exact.poly import UniPoly, poly_from_ints
from nilcert.exact.quad import QuadExt
from nilcert.exact.roots import count_distinct_real_roots, isolate_real_roots
from nilcert.foliation import alpha_exponent
from nilcert.linalg import Matrix, exterior_power
from nilcert.liealg import LieAlgebra, LieAutomorphism, is_unimodular, lower_central_series, restrict_and_descend
from nilcert.nilgroup import HeisenbergMap
from nilcert.randalg import random_nilpotent, random_problem

DATA = Path(__file__).resolve().parent.parent / "data"
TOL = Fraction(1, 10**9)
mpmath.mp.dps = 40


def criterion(n: int, title: str):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException as e:
                ACCEPTANCE_RESULTS[n] = ("FAIL", f"{title} -- {type(e).__name__}: {e}".splitlines()[0])
                raise
            ACCEPTANCE_RESULTS[n] = ("PASS", f"{title}" + (f" ({detail})" if detail else ""))
        return inner
    return wrap


def cli(*args):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in args], out, err)
    return code, out.getvalue(), err.getvalue()


def as_algebraic(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    if isinstance(x, QuadExt):
        return AlgebraicReal.from_quad(x)
    return AlgebraicReal.from_rational(x)


def close(x: AlgebraicReal, target, tol: Fraction = TOL) -> bool:
    a, b = as_algebraic(target).approx(tol / 8), x.approx(tol / 8)
    return abs((a[0] + a[1]) / 2 - (b[0] + b[1]) / 2) <= tol


@functools.lru_cache(maxsize=1)
def random_family_run():
    """200 seeded random problems and their certificates, with timing."""
    rng = random.Random(31415)
    start = time.perf_counter()
    out = []
    for _ in range(200):
        rp = random_problem(rng, 5)
        out.append((rp, certify(rp.problem)))
    return out, time.perf_counter() - start


# --- 1 -----------------------------------------------------------------------------


@criterion(1, "torus [[2,1],[1,1]]: period log((3-sqrt(5))/2), minpoly x^2-3x+1, -0.962423650119 +- 1e-9, < 1 s")
def test_ac1_torus_reproduction():
    start = time.perf_counter()
    code, out, _ = cli("torus", DATA / "torus_reference.json", "--format", "json")
    elapsed = time.perf_counter() - start
    assert code == 0
    report = ser.report_from_dict(json.loads(out)["reports"][0])
    pv = report.period
    assert pv.closed_form == "log((3-sqrt(5))/2)"
    assert pv.exp_period.minpoly.format() == "x^2-3x+1"
    assert pv.exp_period == AlgebraicReal.from_quad(QuadExt(Fraction(3, 2), Fraction(-1, 2), 5))
    mid = (pv.lo + pv.hi) / 2
    assert abs(float(mid) - (-0.962423650119)) <= 1e-9
    ref = mpmath.log((3 - mpmath.sqrt(5)) / 2)
    assert mpmath.mpf(str(pv.lo)) <= ref <= mpmath.mpf(str(pv.hi))
    assert report.paper_comparison is not None and report.paper_comparison.match
    code, text, _ = cli("torus", DATA / "torus_reference.json")
    assert "x^2-3x+1" in text and "log((3-sqrt(5))/2)" in text and "-0.962423650119" in text
    assert elapsed < 1.0
    return f"{elapsed:.3f} s"


# --- 2 -----------------------------------------------------------------------------


@criterion(2, "two-step pipeline p=2, alpha=1+sqrt(2), M'=I: checks pass, e^period = alpha^m, comparison present, < 5 s")
def test_ac2_heisenberg_pipeline():
    start = time.perf_counter()
    code, out, _ = cli("heisenberg", DATA / "two_step_unit.json", "--format", "json")
    elapsed = time.perf_counter() - start
    assert code == 0
    r = ser.report_from_dict(json.loads(out)["reports"][0])
    assert r.check("dense") == "ok"
    assert "ok" in (r.check("homomorphism[printed]"), r.check("homomorphism[halved]"))
    assert r.check(f"preserves_lattice[{r.check('variant')}]") == "ok"
    # independent oracle: Jacobian determinant of f at the identity scales the top form;
    # the holonomy acts on it by the inverse
    alpha = QuadExt(1, 1, 2)
    f = HeisenbergMap.from_unit(alpha, ((1, 0), (0, 1)), r.check("variant"))
    jac = AlgebraicReal.from_quad(f.jacobian_det())
    m = -alpha_exponent(alpha, jac)
    assert r.alpha_exponent == m
    assert r.period.exp_period == AlgebraicReal.from_quad(alpha ** m if m >= 0 else alpha.inverse() ** -m)
    cmp = r.paper_comparison
    assert cmp is not None and cmp.stated == "log(alpha^3)" and cmp.match == (m == 3)
    assert elapsed < 5.0
    return f"m = {m}, comparison {'match' if cmp.match else 'mismatch'} vs stated exponent 3, {elapsed:.2f} s"


# --- 3 -----------------------------------------------------------------------------


@criterion(3, "200 random problems: irreducible integer minpoly, value within 1e-9 of top_action, < 60 s")
def test_ac3_algebraicity_shadow():
    results, elapsed = random_family_run()
    degrees = {}
    for rp, cert in results:
        prob = rp.problem
        mp = cert.minpoly
        assert mp.is_primitive_integer() and mp.lc > 0
        assert is_irreducible(mp)
        x = sympy.Symbol("x")
        assert sympy.Poly([int(c) for c in reversed(mp.coeffs)], x).is_irreducible
        top = top_action(LieAutomorphism(prob.g, prob.induced(), check=False)).value
        assert close(cert.value, top)
        assert verify_certificate(cert, prob) is None
        degrees[mp.degree] = degrees.get(mp.degree, 0) + 1
    assert elapsed < 60.0
    return f"minpoly degrees {dict(sorted(degrees.items()))}, {elapsed:.1f} s"


# --- 4 -----------------------------------------------------------------------------


@criterion(4, "value = algebraic_mul(derived, abelianization) exactly on the random family")
def test_ac4_multiplicativity():
    results, _ = random_family_run()
    split = 0
    for rp, cert in results:
        prob = rp.problem
        if cert.is_base:
            assert prob.h.is_abelian()
            continue
        split += 1
        assert algebraic_mul(cert.derived.value, cert.abelianization.value) == cert.value
        # the two factors are the determinants on [g, g] and on g/[g, g]
        fd, fa = restrict_and_descend(LieAutomorphism(prob.g, prob.induced(), check=False))
        assert close(cert.derived.value, fd.det() if fd.algebra.dim else 1)
        assert close(cert.abelianization.value, fa.det() if fa.algebra.dim else 1)
    assert split >= 50
    return f"{split} non-abelian problems split"


# --- 5 -----------------------------------------------------------------------------


@criterion(5, "cohomology: d^2 = 0, Poincare duality, top Betti 1 on 100 nilpotent algebras; Heisenberg and abelian Betti")
def test_ac5_cohomology_suite():
    rng = random.Random(2718)
    for i in range(100):
        g = random_nilpotent(rng, rng.randint(1, 6), "rejection" if i % 2 else "extension")
        assert lower_central_series(g)[1]
        cx = build_complex(g)
        for k in range(len(cx.differentials) - 1):
            assert (cx.differentials[k + 1] @ cx.differentials[k]).is_zero()
        b = betti_numbers(g)
        assert b == tuple(reversed(b))
        assert b[-1] == 1
    assert betti_numbers(LieAlgebra.heisenberg()) == (1, 2, 2, 1)
    for n in range(7):
        assert betti_numbers(LieAlgebra.abelian(n)) == tuple(comb(n, k) for k in range(n + 1))
    return "100 algebras"


# --- 6 -----------------------------------------------------------------------------


@criterion(6, "trace(ad e_i) = 0 on every randomized nilpotent algebra")
def test_ac6_unimodularity():
    rng = random.Random(1618)
    algebras = [random_nilpotent(rng, rng.randint(1, 6), rng.choice(("extension", "rejection"))) for _ in range(100)]
    algebras += [rp.problem.h for rp, _ in random_family_run()[0]]
    for g in algebras:
        assert lower_central_series(g)[1]
        for i in range(g.dim):
            assert g.ad(g.basis_vector(i)).trace() == 0
        assert is_unimodular(g)
    return f"{len(algebras)} algebras"


# --- 7 -----------------------------------------------------------------------------


def leibniz(rows):
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        sign = (-1) ** sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = sign
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


@criterion(7, "exterior powers equal brute-force minors and are functorial, n <= 4")
def test_ac7_exterior_power():
    rng = random.Random(4242)
    checks = 0
    for _ in range(150):
        n = rng.randint(1, 4)
        a = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        b = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        ma, mb = Matrix(a), Matrix(b)
        for k in range(n + 1):
            e = exterior_power(ma, k)
            for r, I in enumerate(combinations(range(n), k)):
                for c, J in enumerate(combinations(range(n), k)):
                    assert e.entries[r][c] == leibniz([[a[i][j] for j in J] for i in I])
            assert exterior_power(ma @ mb, k) == e @ exterior_power(mb, k)
            checks += 1
    return f"{checks} (matrix, k) cases"


# --- 8 -----------------------------------------------------------------------------


def float_real_root_count(coeffs: list[int]) -> int:
    """Distinct real roots by numpy on the squarefree part (computed by sympy)."""
    x = sympy.Symbol("x")
    sqf = sympy.Poly(list(reversed(coeffs)), x).sqf_part()
    c = [float(v) for v in sqf.all_coeffs()]
    if len(c) == 1:
        return 0
    roots = np.roots(c)
    return int(sum(1 for r in roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r))))


def random_int_poly(rng: random.Random, max_degree: int) -> list[int]:
    d = rng.randint(1, max_degree)
    return [rng.randint(-9, 9) for _ in range(d)] + [rng.choice((1, 2, 3, -1, -2))]


def float_root_in(f: UniPoly, lo: Fraction, hi: Fraction) -> float:
    roots = np.roots([float(c) for c in reversed(f.coeffs)])
    cands = [r.real for r in roots if abs(r.imag) < 1e-7 and float(lo) - 1e-9 <= r.real <= float(hi) + 1e-9]
    assert len(cands) == 1
    return cands[0]


@criterion(8, "500 Sturm counts vs float oracle; minpolys irreducible (sympy); 200 algebraic_mul within 1e-9")
def test_ac8_exact_kernel():
    rng = random.Random(1729)
    x = sympy.Symbol("x")
    minpolys = 0
    algebraics = []
    for _ in range(500):
        coeffs = random_int_poly(rng, 6)
        f = poly_from_ints(coeffs)
        assert count_distinct_real_roots(f) == float_real_root_count(coeffs)
        for lo, hi in isolate_real_roots(f):
            a = minimal_polynomial(f, (lo, hi))
            mp = sympy.Poly([int(c) for c in reversed(a.minpoly.coeffs)], x)
            assert mp.is_irreducible
            assert sympy.rem(sympy.Poly(list(reversed(coeffs)), x), mp).is_zero
            minpolys += 1
            if a.degree <= 4:
                algebraics.append(a)
    pairs = 0
    for _ in range(200):
        a, b = rng.choice(algebraics), rng.choice(algebraics)
        p = algebraic_mul(a, b)
        assert is_irreducible(p.minpoly)
        expected = float_root_in(a.minpoly, a.lo, a.hi) * float_root_in(b.minpoly, b.lo, b.hi)
        lo, hi = p.approx(Fraction(1, 10**12))
        assert abs(float((lo + hi) / 2) - expected) <= 1e-9 * max(1.0, abs(expected))
        pairs += 1
    return f"{minpolys} minimal polynomials, {pairs} products"

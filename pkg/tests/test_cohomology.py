import random
from itertools import combinations, permutations
from math import comb

import pytest
import sympy
from sympy.combinatorics import Permutation
from hypothesis import given
from hypothesis import strategies as st

from nilcert.errors import DomainError
from nilcert.linalg import Matrix
from nilcert.liealg import LieAlgebra, LieAutomorphism
from nilcert.cohomology import (betti, betti_numbers, build_complex, cocycle_basis, differential,
                                induced_action, top_action)
from nilcert.randalg import random_family, random_nilpotent

H = LieAlgebra.heisenberg()
AFFINE = LieAlgebra.from_brackets(2, {(0, 1): (0, 1)})
seeds = st.integers(0, 2**32 - 1)


# --- brute-force oracle straight from the defining formula ------------------------


def _eval_form(coeffs: dict, vectors) -> sympy.Rational:
    """Evaluate sum_I coeffs[I] e^I on a tuple of vectors by the Leibniz rule."""
    k = len(vectors)
    total = sympy.Integer(0)
    for I, c in coeffs.items():
        for perm in permutations(range(k)):
            sign = Permutation(list(perm)).signature()
            term = sympy.Integer(c) * sign
            for slot, idx in zip(perm, I):
                x = vectors[slot][idx]
                term *= sympy.Rational(x.numerator, x.denominator)
            total += term
    return total


def brute_differential(g: LieAlgebra, k: int) -> sympy.Matrix:
    n = g.dim
    src, dst = list(combinations(range(n), k)), list(combinations(range(n), k + 1))
    m = sympy.zeros(len(dst), len(src))
    e = [g.basis_vector(i) for i in range(n)]
    for c, I in enumerate(src):
        for r, J in enumerate(dst):
            xs = [e[j] for j in J]
            val = sympy.Integer(0)
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    rest = [xs[t] for t in range(k + 1) if t not in (i, j)]
                    val += (-1) ** (i + j) * _eval_form({I: 1}, [g.bracket(xs[i], xs[j])] + rest)
            m[r, c] = val
    return m


def brute_betti(g: LieAlgebra) -> tuple[int, ...]:
    n = g.dim
    ranks = [brute_differential(g, k).rank() if 0 < comb(n, k + 1) else 0 for k in range(n)] + [0]
    return tuple(comb(n, k) - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1))


# --- complex ---------------------------------------------------------------------


def test_heisenberg_differential_sign():
    d1 = differential(H, 1)             # rows: X^Y, X^Z, Y^Z ; cols: X*, Y*, Z*
    assert d1 == Matrix([[0, 0, -1], [0, 0, 0], [0, 0, 0]])


def test_abelian_differentials_vanish():
    cx = build_complex(LieAlgebra.abelian(4))
    assert all(d.is_zero() for d in cx.differentials)


def test_dim_zero_complex():
    cx = build_complex(LieAlgebra.abelian(0))
    assert cx.differentials == ()
    assert betti_numbers(LieAlgebra.abelian(0)) == (1,)


def test_build_complex_rejects_non_lie():
    g = LieAlgebra.from_brackets(3, {(0, 1): (0, 0, 1), (1, 2): (0, 1, 0)})
    with pytest.raises(DomainError):
        build_complex(g)


@pytest.mark.parametrize("g", [H, AFFINE, LieAlgebra.from_brackets(4, {(0, 1): (0, 0, 1, 0), (0, 2): (0, 0, 0, 1)})])
def test_differential_matches_brute_force(g):
    for k in range(g.dim):
        ours = differential(g, k)
        assert sympy.Matrix(ours.tolist()) == brute_differential(g, k)


# --- Betti numbers ---------------------------------------------------------------


def test_betti_examples():
    assert betti_numbers(LieAlgebra.abelian(2)) == (1, 2, 1)
    assert betti_numbers(H) == (1, 2, 2, 1)
    assert betti_numbers(H) == brute_betti(H)
    assert betti_numbers(AFFINE) == (1, 1, 0)
    with pytest.raises(DomainError):
        betti(H, 4)


@pytest.mark.parametrize("n", range(0, 6))
def test_abelian_betti_binomial(n):
    assert betti_numbers(LieAlgebra.abelian(n)) == tuple(comb(n, k) for k in range(n + 1))


@given(seeds, st.integers(1, 5), st.sampled_from(("extension", "rejection")))
def test_betti_properties(seed, dim, method):
    g = random_nilpotent(random.Random(seed), dim, method)
    cx = build_complex(g)
    for k in range(len(cx.differentials) - 1):
        assert (cx.differentials[k + 1] @ cx.differentials[k]).is_zero()
    b = betti_numbers(g)
    assert b == tuple(reversed(b))
    assert b[0] == 1 and b[-1] == 1
    assert sum((-1) ** k * x for k, x in enumerate(b)) == 0


@given(seeds, st.integers(1, 4))
def test_betti_matches_brute_force(seed, dim):
    g = random_nilpotent(random.Random(seed), dim)
    assert betti_numbers(g) == brute_betti(g)


# --- actions ---------------------------------------------------------------------


def test_top_action_examples():
    assert top_action(LieAutomorphism.identity(H)).value == 1
    a = LieAlgebra.abelian(2)
    assert top_action(LieAutomorphism(a, Matrix([[2, 1], [1, 1]]))).value == 1
    f = LieAutomorphism(H, Matrix.diag([2, 3, 6]))
    assert top_action(f).value == 36
    # brute-force pullback of X*^Y*^Z* evaluated on (X, Y, Z)
    cols = [f.matrix @ H.basis_vector(i) for i in range(3)]
    assert _eval_form({(0, 1, 2): 1}, cols) == 36


def test_top_action_requires_unimodular():
    with pytest.raises(DomainError):
        top_action(LieAutomorphism(AFFINE, Matrix.identity(2)))


def test_induced_action_examples():
    f = LieAutomorphism(H, Matrix.diag([2, 3, 6]))
    assert induced_action(f, 3) == Matrix([[36]])
    assert induced_action(f, 1) == Matrix.diag([2, 3])
    assert induced_action(LieAutomorphism.identity(H), 2) == Matrix.identity(2)
    a = LieAutomorphism(LieAlgebra.abelian(2), Matrix([[2, 1], [1, 1]]))
    m = induced_action(a, 1)
    assert m == Matrix([[2, 1], [1, 1]]).T and m.det() == 1


def test_cocycle_basis_heisenberg():
    im, reps = cocycle_basis(H, 2)
    assert len(im) == 1 and len(reps) == 2


@given(seeds)
def test_top_action_multiplicative_and_consistent(seed):
    rng = random.Random(seed)
    inst = random_family(rng, 5)
    f = LieAutomorphism(inst.h, inst.F)
    g = LieAutomorphism(inst.h, inst.F ** rng.choice((-1, 2)))
    assert top_action(f.compose(g)).value == top_action(f).value * top_action(g).value
    top = induced_action(f, inst.h.dim)
    assert top == Matrix([[top_action(f).value]])

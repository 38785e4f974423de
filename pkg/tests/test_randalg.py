import random
from math import isqrt

from hypothesis import given, settings
from hypothesis import strategies as st

from nilcert.cohomology import betti
from nilcert.linalg import Matrix
from nilcert.liealg import LieAutomorphism, in_span, is_nilpotent, span
from nilcert.randalg import (block_eigenvector, central_extension, hyperbolic_block, random_family,
                             random_nilpotent, random_problem, random_unimodular)
from nilcert.liealg import LieAlgebra

seeds = st.integers(0, 2**32 - 1)


def test_central_extension_of_plane_is_heisenberg():
    g = central_extension(LieAlgebra.abelian(2), {(0, 1): 1})
    assert g == LieAlgebra.heisenberg()


@given(seeds, st.integers(1, 6), st.sampled_from(("extension", "rejection")))
def test_random_nilpotent_is_nilpotent(seed, dim, method):
    g = random_nilpotent(random.Random(seed), dim, method)
    assert g.dim == dim and g.validate() is None and is_nilpotent(g)
    assert betti(g, dim) == 1


@given(seeds, st.integers(1, 5))
def test_random_unimodular(seed, n):
    u = random_unimodular(random.Random(seed), n)
    assert u.is_integer() and abs(u.det()) == 1


@given(seeds)
def test_hyperbolic_block_eigenvector(seed):
    b = hyperbolic_block(random.Random(seed))
    m = Matrix(b)
    disc = m.trace() ** 2 - 4 * m.det()
    assert m.det() in (1, -1) and disc > 0 and isqrt(int(disc)) ** 2 != disc
    lam, v = block_eigenvector(b)
    assert m @ v == tuple(lam * x for x in v)


@settings(max_examples=40)
@given(seeds)
def test_family_invariants(seed):
    inst = random_family(random.Random(seed), 5)
    f = LieAutomorphism(inst.h, inst.F)
    assert inst.F.is_integer() and abs(f.det()) == 1
    k = span(list(inst.K), inst.h.dim) if inst.K else []
    for v in k:
        assert in_span(k, inst.F @ v)
        for i in range(inst.h.dim):
            assert in_span(k, inst.h.bracket(inst.h.basis_vector(i), v))


@settings(max_examples=20)
@given(seeds)
def test_random_problem_validates(seed):
    rp = random_problem(random.Random(seed))
    rp.problem.validate()
    assert abs(rp.U.det()) == 1

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from nilcert.errors import DomainError, LatticeError, NotAUnit
from nilcert.exact.quad import QuadExt
from nilcert.linalg import Matrix, row_space_basis
from nilcert.nilgroup import (GeneratedGroup, HeisenbergLattice, HeisenbergMap, HeisenbergPoint, Unipotent,
                              closure_lie_algebra, homomorphism_check, preserves_lattice, u_exp, u_log,
                              validate_parameters)

P = 2
ALPHA = QuadExt(1, 1, P)
LAT = HeisenbergLattice(P, 1)
A1, A2, A3, A4 = LAT.generators()
quads = st.builds(lambda a, b: QuadExt(a, b, P), rationals, rationals)


def e(i, j, n=3):
    return Matrix([[int((r, c) == (i, j)) for c in range(n)] for r in range(n)])


@st.composite
def unipotents(draw, n=None, max_n=4):
    n = draw(st.integers(1, max_n)) if n is None else n
    rows = []
    for i in range(n):
        rows.append([QuadExt(int(i == j), 0, P) if j <= i else draw(quads) for j in range(n)])
    return Unipotent(Matrix(rows))


# --- log and exp -----------------------------------------------------------------------


def test_log_examples():
    assert u_log(Unipotent(Matrix.identity(3))).is_zero()
    assert u_log(A1.to_unipotent()) == e(0, 1)
    comm = A1.to_unipotent().commutator(A2.to_unipotent())
    assert HeisenbergPoint.from_unipotent(comm, P) == HeisenbergPoint.of(0, 0, 1, P)
    assert u_log(comm) == e(0, 2)


def test_unipotent_rejects_non_unipotent():
    with pytest.raises(DomainError):
        Unipotent(Matrix([[2, 0], [0, 1]]))
    with pytest.raises(DomainError):
        Unipotent(Matrix([[1, 0], [1, 1]]))


@given(unipotents())
def test_exp_log_inverse(u):
    assert u_exp(u_log(u)) == u
    x = u_log(u)
    assert u_log(u_exp(x)) == x


@given(unipotents(3), unipotents(3))
def test_group_law(u, v):
    assert (u @ v) @ v.inverse() == u
    pu, pv = HeisenbergPoint.from_unipotent(u, P), HeisenbergPoint.from_unipotent(v, P)
    assert (pu * pv).to_unipotent() == u @ v


@given(quads, quads, quads, st.integers(-5, 5))
def test_point_power_formula(x, y, z, m):
    g = HeisenbergPoint(x, y, z)
    acc = HeisenbergPoint.identity(P)
    step = g if m >= 0 else g.inverse()
    for _ in range(abs(m)):
        acc = acc * step
    assert g ** m == acc


# --- closure -----------------------------------------------------------------------


def test_closure_dense_for_lattice():
    cl = closure_lie_algebra(LAT.group())
    assert cl.dense and cl.real_dim == 3
    assert cl.rational_dim == 6


def test_closure_small_cases():
    single = closure_lie_algebra(GeneratedGroup((A1.to_unipotent(),), 3))
    assert single.real_dim == 1 and not single.dense
    empty = closure_lie_algebra(GeneratedGroup((), 3))
    assert empty.real_dim == 0 and empty.basis == ()
    # A1 and A3 alone commute: real span is one line even though the rational span is 2-dimensional
    pair = closure_lie_algebra(GeneratedGroup((A1.to_unipotent(), A3.to_unipotent()), 3))
    assert pair.rational_dim == 2 and pair.real_dim == 1


def _rational_coords(m: Matrix) -> tuple:
    out = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        x = m[i, j]
        x = x if isinstance(x, QuadExt) else QuadExt(x, 0, P)
        out += [x.a, x.b]
    return tuple(out)


@given(st.lists(unipotents(3), min_size=1, max_size=3))
def test_closure_bracket_closed(gens):
    cl = closure_lie_algebra(GeneratedGroup(tuple(gens), 3))
    basis = [_rational_coords(m) for m in cl.matrices]
    for a in cl.matrices:
        for b in cl.matrices:
            v = _rational_coords(a @ b - b @ a)
            assert len(row_space_basis(basis + [v], 6)) == len(basis)
    for u in gens:
        assert len(row_space_basis(basis + [_rational_coords(u_log(u))], 6)) == len(basis)


# --- membership -----------------------------------------------------------------------


def test_membership_examples():
    m = LAT.membership(HeisenbergPoint.identity(P))
    assert m.member and m.exponents == (0,) * 6
    comm = HeisenbergPoint.from_unipotent(A1.to_unipotent().commutator(A2.to_unipotent()), P)
    m = LAT.membership(comm)
    assert m.member and m.exponents == (0, 0, 0, 0, 1, 0)
    assert not LAT.membership(HeisenbergPoint.of(Fraction(1, 2), 0, 0, P)).member


def test_membership_respects_k():
    lat3 = HeisenbergLattice(P, 3)
    assert not lat3.membership(HeisenbergPoint.of(QuadExt(0, 1, P), 0, 0, P)).member
    assert lat3.membership(HeisenbergPoint.of(QuadExt(0, 3, P), 0, 0, P)).member
    with pytest.raises(LatticeError):
        HeisenbergLattice(P, 0)


@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.integers(1, 3))
def test_membership_normal_form_round_trip(exps, k):
    lat = HeisenbergLattice(P, k)
    g = lat.normal_form(exps)
    m = lat.membership(g)
    assert m.member and tuple(m.exponents) == tuple(exps)
    assert lat.normal_form(m.exponents) == g


# --- coordinate maps -------------------------------------------------------------------


def test_homomorphism_examples():
    assert homomorphism_check(HeisenbergMap.identity(P)) is None
    diag = HeisenbergMap.linear(ALPHA, 0, 0, ALPHA, ALPHA * ALPHA, P)
    assert homomorphism_check(diag) is None


def test_variants_for_shear():
    shear = ((1, 1), (0, 1))
    printed = homomorphism_check(HeisenbergMap.from_unit(ALPHA, shear, "printed"))
    halved = homomorphism_check(HeisenbergMap.from_unit(ALPHA, shear, "halved"))
    assert printed is not None and printed.coordinate == "z"
    assert halved is None


@given(st.sampled_from([((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 1), (1, 1)), ((0, -1), (1, 0))]))
def test_halved_variant_always_homomorphism(m):
    f = HeisenbergMap.from_unit(ALPHA, m, "halved")
    assert homomorphism_check(f) is None
    g = f.inverse()
    assert homomorphism_check(g) is None
    pt = HeisenbergPoint.of(QuadExt(1, 2, P), 3, QuadExt(-1, 1, P), P)
    assert g(f(pt)) == pt


def test_preserves_lattice_examples():
    f = HeisenbergMap.from_unit(ALPHA, ((1, 0), (0, 1)), "printed")
    chk = preserves_lattice(f, LAT)
    assert chk.preserved
    assert chk.forward[0].exponents == (1, 1, 0, 0, 0, 0)       # f(A1) = A1 A3
    assert preserves_lattice(HeisenbergMap.identity(P), LAT).preserved
    root2 = QuadExt(0, 1, P)
    scale = HeisenbergMap.linear(root2, 0, 0, root2, 2, P)
    chk = preserves_lattice(scale, LAT)
    assert not chk.preserved
    assert chk.first_failure().startswith("f^-1(A1)")


def test_shear_halved_breaks_integrality():
    f = HeisenbergMap.from_unit(ALPHA, ((1, 1), (0, 1)), "halved")
    chk = preserves_lattice(f, LAT)
    assert not chk.preserved and "central part" in chk.first_failure()


def test_validate_parameters():
    up = validate_parameters(2, 1, 1, ((1, 0), (0, 1)))
    assert up.k == 1 and up.alpha * up.beta == 1
    assert validate_parameters(3, 2, 1, ((1, 0), (0, 1))).k == 1
    with pytest.raises(NotAUnit):
        validate_parameters(2, 0, 1, ((1, 0), (0, 1)))
    with pytest.raises(DomainError):
        validate_parameters(2, 1, 1, ((2, 0), (0, 1)))
    with pytest.raises(LatticeError):
        validate_parameters(2, 1, 0, ((1, 0), (0, 1)))

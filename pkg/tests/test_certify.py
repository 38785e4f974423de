import dataclasses
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilcert.certify import (LatticeAutomorphismProblem, certify, level_determinant_product,
                             recursion_depth_bound, verify_certificate)
from nilcert.cohomology import top_action
from nilcert.errors import DomainError, LatticeError
from nilcert.exact.algebraic import AlgebraicReal, algebraic_mul
from nilcert.exact.factor import is_irreducible
from nilcert.exact.poly import UniPoly
from nilcert.exact.quad import QuadExt
from nilcert.linalg import IntLattice, Matrix
from nilcert.liealg import LieAlgebra, LieAutomorphism, derived_series, lower_central_series
from nilcert.randalg import random_problem, random_problem_pair

H = LieAlgebra.heisenberg()
A = Matrix([[2, 1], [1, 1]])
seeds = st.integers(0, 2**32 - 1)


def torus_quotient_problem() -> LatticeAutomorphismProblem:
    # g = R^2 / (eigenline of lambda = (3 - sqrt 5)/2); the row kills (1, lambda - 2)
    row = Matrix([[1, QuadExt(Fraction(-1, 2), Fraction(1, 2), 5)]])
    return LatticeAutomorphismProblem(LieAlgebra.abelian(2), A, row, LieAlgebra.abelian(1))


def heisenberg_problem(f) -> LatticeAutomorphismProblem:
    return LatticeAutomorphismProblem(H, f, Matrix.identity(3), H)


# --- examples -----------------------------------------------------------------------


def test_torus_quotient_value():
    prob = torus_quotient_problem()
    cert = certify(prob)
    assert cert.value == AlgebraicReal.from_quad(QuadExt(Fraction(3, 2), Fraction(1, 2), 5))
    assert cert.minpoly.format() == "x^2-3x+1"
    assert cert.value.closed_form() == "(3+sqrt(5))/2"
    assert verify_certificate(cert, prob) is None


def test_identity_gives_one():
    for prob in (heisenberg_problem(Matrix.identity(3)), torus_quotient_problem()):
        prob = dataclasses.replace(prob, F=Matrix.identity(prob.h.dim))
        cert = certify(prob)
        assert cert.value == 1 and cert.minpoly == UniPoly((-1, 1))


def test_heisenberg_diag_needs_non_strict_mode():
    prob = heisenberg_problem(Matrix.diag([2, 3, 6]))
    with pytest.raises(LatticeError):
        certify(prob)
    cert = certify(prob, strict=False)
    assert cert.value == 36 and cert.minpoly == UniPoly((-36, 1))
    assert [lv.tag for lv in cert.levels] == ["derived", "abelianization"]
    assert [lv.exact for lv in cert.levels] == [6, 6]
    assert cert.derived.value == 6 and cert.abelianization.value == 6
    assert verify_certificate(cert, prob) is None


def test_unit_heisenberg_automorphism():
    f = Matrix([[2, 1, 0], [1, 1, 0], [0, 0, 1]])
    cert = certify(heisenberg_problem(f))
    assert cert.value == 1
    assert cert.depth == 2


def test_non_trivial_lattice_basis():
    # same torus problem, lattice spanned by the columns of a unimodular U
    u = Matrix([[1, 1], [0, 1]])
    prob = dataclasses.replace(torus_quotient_problem(), lattice=IntLattice.from_generators(u.T))
    assert certify(prob).value == certify(torus_quotient_problem()).value


# --- preconditions ------------------------------------------------------------------


def test_rejects_non_nilpotent():
    affine = LieAlgebra.from_brackets(2, {(0, 1): (0, 1)})
    with pytest.raises(DomainError, match="nilpotent"):
        certify(LatticeAutomorphismProblem(affine, Matrix.identity(2), Matrix.identity(2), affine))


def test_rejects_non_lattice_map():
    with pytest.raises(LatticeError):
        certify(LatticeAutomorphismProblem(LieAlgebra.abelian(2), Matrix([[1, Fraction(1, 2)], [0, 1]]),
                                           Matrix.identity(2), LieAlgebra.abelian(2)))


def test_rejects_non_surjective_projection():
    g = LieAlgebra.abelian(2)
    with pytest.raises(DomainError, match="surjective"):
        certify(LatticeAutomorphismProblem(g, A, Matrix([[1, 1], [2, 2]]), g))


def test_rejects_non_commuting_diagram():
    with pytest.raises(DomainError, match="commute"):
        certify(LatticeAutomorphismProblem(LieAlgebra.abelian(2), A, Matrix([[1, 0]]), LieAlgebra.abelian(1)))


# --- verification -------------------------------------------------------------------


def test_verify_detects_reducible_minpoly():
    prob = torus_quotient_problem()
    cert = certify(prob)
    bad = dataclasses.replace(cert, minpoly=cert.minpoly * UniPoly((-1, 1)))
    assert verify_certificate(bad, prob).kind == "reducibility"


def test_verify_detects_perturbed_level():
    prob = heisenberg_problem(Matrix.diag([2, 3, 6]))
    cert = certify(prob, strict=False)
    lv = dataclasses.replace(cert.levels[0], eigenvalue=AlgebraicReal.from_rational(7))
    bad = dataclasses.replace(cert, levels=(lv,) + cert.levels[1:])
    assert verify_certificate(bad, prob).kind == "product"


def test_verify_detects_non_integer_level():
    cert = certify(torus_quotient_problem())
    lv = dataclasses.replace(cert.levels[0], matrix=Matrix([[Fraction(1, 2)]]))
    assert verify_certificate(dataclasses.replace(cert, levels=(lv,)), None).kind == "integrality"


def test_verify_detects_wrong_value_against_problem():
    prob = torus_quotient_problem()
    cert = certify(prob)
    other = certify(dataclasses.replace(prob, F=A.inverse()))
    assert verify_certificate(other, prob).kind == "numeric"


# --- properties on the random family ------------------------------------------------


@settings(max_examples=40)
@given(seeds)
def test_random_certificates_verify(seed):
    rp = random_problem(random.Random(seed))
    prob = rp.problem
    cert = certify(prob)
    assert verify_certificate(cert, prob) is None
    assert cert.minpoly.is_primitive_integer() and is_irreducible(cert.minpoly)
    top = top_action(LieAutomorphism(prob.g, prob.induced(), check=False)).value
    assert cert.value == (AlgebraicReal.from_quad(top) if isinstance(top, QuadExt) else top)
    assert cert.depth == recursion_depth_bound(prob.h)
    if not cert.is_base:
        assert algebraic_mul(cert.derived.value, cert.abelianization.value) == cert.value
    exact = level_determinant_product(cert)
    if exact is not None:
        assert cert.value == (AlgebraicReal.from_quad(exact) if isinstance(exact, QuadExt) else exact)


@settings(max_examples=30)
@given(seeds)
def test_multiplicativity(seed):
    pf, pg, pfg = random_problem_pair(random.Random(seed))
    vf, vg, vfg = certify(pf).value, certify(pg).value, certify(pfg).value
    assert algebraic_mul(vf, vg) == vfg
    assert abs(float(vf) * float(vg) - float(vfg)) <= 1e-9 * max(1.0, abs(float(vfg)))


def test_depth_is_derived_length_not_nilpotency_rank():
    # filiform 4-dim: [e0, e1] = e2, [e0, e2] = e3 ; nilpotency rank 3, derived length 2
    fil = LieAlgebra.from_brackets(4, {(0, 1): (0, 0, 1, 0), (0, 2): (0, 0, 0, 1)})
    assert lower_central_series(fil)[2] == 3
    assert len(derived_series(fil).members) - 1 == 2
    cert = certify(LatticeAutomorphismProblem(fil, Matrix.identity(4), Matrix.identity(4), fil))
    assert cert.depth == 2

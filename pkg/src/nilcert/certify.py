"""Algebraicity certificates for the top-degree action of a lattice automorphism.

Input: a nilpotent Lie algebra h with a full lattice L, an automorphism F of h
preserving L, and a surjective homomorphism proj: h -> g. F descends to g,
and its pullback on the one-dimensional H^l(g) (l = dim g) is det(F_g).

The certificate follows the induction on the Lie algebra:

* base case (h abelian): in a lattice basis F is an integer matrix. The
  l x l minors of proj give a covector w on Lambda^l h with
  w . Lambda^l(F) = det(F_g) w, so det(F_g) is an eigenvalue of the integer
  matrix Lambda^l(F) and its minimal polynomial is an irreducible factor of
  that matrix's characteristic polynomial.
* recursion: split h along [h, h] (with lattice L n [h, h], saturated) and
  g along [g, g]; det(F_g) is the product of the values for the derived
  and abelianized sub-problems, combined exactly with algebraic_mul.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .cohomology import top_action
from .errors import DomainError, LatticeError, NotAnAutomorphism
from .exact.algebraic import AlgebraicReal, algebraic_mul
from .exact.factor import factor, is_irreducible
from .exact.poly import UniPoly
from .exact.quad import QuadExt
from .liealg import (LieAlgebra, LieAutomorphism, coordinates_in, derived_series, derived_subalgebra,
                     is_homomorphism, lower_central_series, quotient, subalgebra)
from .linalg import IntLattice, Matrix, char_poly, compound, complete_to_unimodular, rref, saturate

NUMERIC_TOL = Fraction(1, 10**9)


def right_inverse(p: Matrix) -> Matrix:
    """S with p @ S = identity for a full-row-rank p (supported on pivot columns)."""
    rows, cols = p.shape
    if rows == 0:
        return Matrix.zeros(cols, 0)
    _, piv = rref(p.tolist())
    if len(piv) != rows:
        raise DomainError("projection is not surjective")
    sub = p.submatrix(range(rows), piv).inverse()
    out = [[Fraction(0)] * rows for _ in range(cols)]
    for r, c in enumerate(piv):
        out[c] = list(sub.row(r))
    return Matrix(out, rows)


def induced_map(proj: Matrix, f: Matrix) -> Matrix:
    """F_g with F_g proj = proj F; raises if F does not descend."""
    fg = proj @ f @ right_inverse(proj) if proj.rows else Matrix.zeros(0, 0)
    if proj.rows and fg @ proj != proj @ f:
        raise DomainError("diagram does not commute: F does not descend along proj")
    return fg


@dataclass(frozen=True)
class LatticeAutomorphismProblem:
    """h with lattice L, automorphism F, and the projection onto g.

    ``F`` and ``proj`` are in h's basis; ``lattice`` rows are the lattice basis
    in the same coordinates (default: the standard lattice).
    """

    h: LieAlgebra
    F: Matrix
    proj: Matrix
    g: LieAlgebra
    lattice: IntLattice | None = None

    def lattice_basis(self) -> Matrix:
        lat = self.lattice or IntLattice.standard(self.h.dim)
        return lat.basis.T  # columns

    def in_lattice_basis(self) -> LatticeAutomorphismProblem:
        """Equivalent problem with L = Z^m."""
        if self.lattice is None or self.lattice.basis == Matrix.identity(self.h.dim):
            return replace(self, lattice=None)
        b = self.lattice_basis()
        return LatticeAutomorphismProblem(self.h.change_basis(b), b.inverse() @ self.F @ b,
                                          self.proj @ b, self.g, None)

    def induced(self) -> Matrix:
        return induced_map(self.proj, self.F)

    def validate(self, strict: bool = True) -> None:
        """Raises on the first failed precondition.

        With strict=False, F only has to map the lattice into itself
        (integer, nonzero determinant) instead of onto itself.
        """
        h, g = self.h, self.g
        m = h.dim
        if self.lattice is not None and (self.lattice.ambient != m or not self.lattice.is_full()):
            raise LatticeError("lattice must be of full rank in h")
        if self.F.shape != (m, m):
            raise DomainError(f"F has shape {self.F.shape}, expected {(m, m)}")
        if self.proj.shape != (g.dim, m):
            raise DomainError(f"proj has shape {self.proj.shape}, expected {(g.dim, m)}")
        h.require_valid()
        g.require_valid()
        if not lower_central_series(h)[1]:
            raise DomainError("h is not nilpotent")
        lp = self.in_lattice_basis()
        if any(x != 0 and isinstance(x, QuadExt) and x.b != 0 for r in lp.h.c for v in r for x in v):
            raise DomainError("structure constants of h must be rational")
        if not lp.F.is_integer():
            raise LatticeError("F does not preserve the lattice (non-integer entries in a lattice basis)")
        if lp.F.det() == 0 or (strict and lp.F.det() not in (1, -1)):
            raise LatticeError(f"F does not preserve the lattice (det {lp.F.det()} is not a unit)")
        LieAutomorphism(h, self.F)
        if self.proj.rank() != g.dim:
            raise DomainError("proj is not surjective")
        bad = is_homomorphism(h, g, self.proj)
        if bad is not None:
            raise DomainError(f"proj is not a Lie algebra homomorphism (basis pair {bad})")
        self.induced()


@dataclass(frozen=True)
class Level:
    """One base-case computation: an integer matrix and its certified eigenvalue."""

    path: str                  # e.g. "root", "derived", "abelianization/derived"
    tag: str                   # "derived" | "abelianization" | "root"
    matrix: Matrix             # Lambda^l(F) on the lattice, integer
    charpoly: UniPoly
    eigenvalue: AlgebraicReal
    exact: object              # the eigenvalue in Q or Q(sqrt(p))


@dataclass(frozen=True)
class AlgebraicityCertificate:
    tag: str
    path: str
    value: AlgebraicReal
    minpoly: UniPoly
    levels: tuple[Level, ...]
    exact: object = None       # value in Q(sqrt(p)) when known
    derived: AlgebraicityCertificate | None = None
    abelianization: AlgebraicityCertificate | None = None
    depth: int = 1

    @property
    def is_base(self) -> bool:
        return self.derived is None


def _eigen_scalar(w: tuple, fhat: Matrix):
    """lam with w . fhat = lam w, exact."""
    image = (fhat.T @ w) if fhat.rows else ()
    j = next(i for i, x in enumerate(w) if x != 0)
    lam = image[j] / w[j]
    for a, b in zip(image, w):
        if a != lam * b:
            raise DomainError("volume covector of g is not an eigenvector: F does not descend")
    return lam


def _certify_base(h: LieAlgebra, f: Matrix, proj: Matrix, tag: str, path: str) -> AlgebraicityCertificate:
    l = proj.rows
    fhat = compound(f, l)
    if l == 0:
        w = (Fraction(1),)
    else:
        w = compound(proj, l).row(0)
    if all(x == 0 for x in w):
        raise DomainError("proj is not surjective")
    lam = _eigen_scalar(w, fhat)
    cp = char_poly(fhat)
    # the irreducible factor of the characteristic polynomial vanishing at lam;
    # picked by exact evaluation, so repeated eigenvalues cannot confuse it
    factors = [q for q, _ in factor(cp) if q(lam) == 0]
    if len(factors) != 1:
        raise DomainError("certified eigenvalue is not a root of exactly one irreducible factor")
    mp = factors[0]
    value = AlgebraicReal.from_quad(lam if isinstance(lam, QuadExt) else QuadExt(lam, 0, 2))
    if value.minpoly != mp:
        raise DomainError("minimal polynomial mismatch in base case")
    level = Level(path, tag, fhat, cp, value, lam)
    return AlgebraicityCertificate(tag, path, value, mp, (level,), lam, depth=1 if h.dim else 0)


def _split_problem(h: LieAlgebra, f: Matrix, proj: Matrix, g: LieAlgebra):
    """Sub-problems on [h, h] -> [g, g] and h/[h, h] -> g/[g, g], both in lattice bases."""
    m = h.dim
    dh = derived_subalgebra(h)
    sat = saturate(dh, m)
    r = sat.rank
    v = complete_to_unimodular(sat.basis)
    vinv = v.inverse()
    hv = h.change_basis(v)
    fv = vinv @ f @ v
    if not fv.is_integer():
        raise LatticeError("F does not preserve the lattice")
    pv = proj @ v
    f1 = fv.submatrix(range(r), range(r))
    f2 = fv.submatrix(range(r, m), range(r, m))
    h1 = LieAlgebra(r, [[hv.c[i][j][:r] for j in range(r)] for i in range(r)], h.field)
    h2 = LieAlgebra.abelian(m - r, h.field)

    dg = derived_subalgebra(g)
    g1 = subalgebra(g, dg)
    q = quotient(g, dg)
    p1_cols = [coordinates_in(dg, pv.column(j)) for j in range(r)]
    p1 = Matrix.from_columns(p1_cols, len(dg)) if r else Matrix.zeros(len(dg), 0)
    p2 = q.projection @ pv.submatrix(range(g.dim), range(r, m)) if q.algebra.dim else Matrix.zeros(0, m - r)
    if m - r == 0:
        p2 = Matrix.zeros(q.algebra.dim, 0)
    return (h1, f1, p1, g1), (h2, f2, p2, q.algebra)


def _certify(h: LieAlgebra, f: Matrix, proj: Matrix, g: LieAlgebra, tag: str, path: str) -> AlgebraicityCertificate:
    if h.is_abelian():
        return _certify_base(h, f, proj, tag, path)
    (h1, f1, p1, g1), (h2, f2, p2, g2) = _split_problem(h, f, proj, g)
    sub = "" if path == "root" else path + "/"
    c1 = _certify(h1, f1, p1, g1, "derived", sub + "derived")
    c2 = _certify(h2, f2, p2, g2, "abelianization", sub + "abelianization")
    value = algebraic_mul(c1.value, c2.value)
    exact = c1.exact * c2.exact if c1.exact is not None and c2.exact is not None and _same_field(c1.exact, c2.exact) else None
    return AlgebraicityCertificate(tag, path, value, value.minpoly, c1.levels + c2.levels, exact,
                                   c1, c2, 1 + max(c1.depth, c2.depth))


def _same_field(a, b) -> bool:
    if isinstance(a, QuadExt) and isinstance(b, QuadExt) and a.b != 0 and b.b != 0:
        return a.p == b.p
    return True


def certify(prob: LatticeAutomorphismProblem, strict: bool = True) -> AlgebraicityCertificate:
    """Certified algebraic value of det(F_g), the pullback scalar on H^l(g)."""
    prob.validate(strict)
    lp = prob.in_lattice_basis()
    return _certify(lp.h, lp.F, lp.proj, lp.g, "root", "root")


# --- independent re-check -------------------------------------------------------


@dataclass(frozen=True)
class CertificateViolation:
    kind: str  # integrality | reducibility | product | level | numeric
    detail: str

    def __str__(self):
        return f"{self.kind}: {self.detail}"


def _interval_distance(a: AlgebraicReal, target, tol: Fraction) -> bool:
    x = a.refined(tol / 4)
    if isinstance(target, QuadExt):
        tlo, thi = target.bounds(64)
    else:
        tlo = thi = Fraction(target)
    return max(abs(x.hi - tlo), abs(thi - x.lo)) <= tol


def verify_certificate(cert: AlgebraicityCertificate, prob: LatticeAutomorphismProblem | None) -> CertificateViolation | None:
    """First failed check, or None.

    Checks, in order: every level matrix is integral; the final minimal
    polynomial is an irreducible integer polynomial; the final value is the
    exact product of the level eigenvalues; each level eigenvalue is a root of
    its level's characteristic polynomial; the value agrees with the top
    action of the induced map on g within 1e-9 (skipped when prob is None).
    """
    for lv in cert.levels:
        if not lv.matrix.is_integer():
            return CertificateViolation("integrality", f"level {lv.path} has a non-integer matrix")
    if not cert.minpoly.is_primitive_integer() or not is_irreducible(cert.minpoly):
        return CertificateViolation("reducibility", f"final minimal polynomial {cert.minpoly.format()} is not irreducible over Z")
    if cert.value.minpoly != cert.minpoly:
        return CertificateViolation("reducibility", "final minimal polynomial does not match the value")
    prod = AlgebraicReal.from_rational(1)
    for lv in cert.levels:
        prod = algebraic_mul(prod, lv.eigenvalue)
    if prod != cert.value:
        return CertificateViolation("product", f"product of level eigenvalues {prod} differs from final value {cert.value}")
    for lv in cert.levels:
        if char_poly(lv.matrix) != lv.charpoly:
            return CertificateViolation("level", f"level {lv.path}: stored characteristic polynomial is wrong")
        if not lv.eigenvalue.minpoly.divides(lv.charpoly):
            return CertificateViolation("level", f"level {lv.path}: eigenvalue is not a root of the characteristic polynomial")
    if prob is not None:
        top = top_action(LieAutomorphism(prob.g, prob.induced(), check=False)).value
        if not _interval_distance(cert.value, top, NUMERIC_TOL):
            return CertificateViolation("numeric", f"certified value {cert.value} differs from top action {top}")
    return None


def level_determinant_product(cert: AlgebraicityCertificate):
    """Product of the exact level eigenvalues (None if fields are mixed)."""
    acc = Fraction(1)
    for lv in cert.levels:
        if isinstance(acc, QuadExt) and isinstance(lv.exact, QuadExt) and not _same_field(acc, lv.exact):
            return None
        acc = acc * lv.exact
    return acc


def recursion_depth_bound(h: LieAlgebra) -> int:
    """Number of strict steps in the derived series; the certificate depth equals it."""
    return len(derived_series(h).members) - 1 if h.dim else 0

"""Finite-dimensional Lie algebras given by structure constants.

The bracket of basis vectors is ``[e_i, e_j] = sum_k c[i][j][k] e_k``.
Subspaces are always carried as reduced row echelon bases, so the pivot
order (increasing coordinate index) is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import DomainError, NotAnAutomorphism
from .exact.quad import QuadExt, field_of
from .linalg import Matrix, rank_kernel, row_space_basis, rref

Vector = tuple


def _zero_vec(n: int) -> Vector:
    return tuple(Fraction(0) for _ in range(n))


def _coerce(x, p: int | None):
    if isinstance(x, QuadExt):
        return x
    x = Fraction(x)
    return x


@dataclass(frozen=True)
class Violation:
    kind: str  # "antisymmetry" | "jacobi"
    indices: tuple[int, ...]
    detail: str

    def __str__(self):
        return f"{self.kind} violated at {self.indices}: {self.detail}"


class LieAlgebra:
    """Structure-constant Lie algebra over Q or Q(sqrt(p)).

    Construction does not enforce the Lie axioms; call :meth:`validate`
    (report-valued) or :meth:`require_valid`.
    """

    __slots__ = ("dim", "field", "c")

    def __init__(self, dim: int, structure, field: int | None = None):
        c = tuple(
            tuple(tuple(_coerce(structure[i][j][k], field) for k in range(dim)) for j in range(dim))
            for i in range(dim)
        )
        detected = field_of(x for row in c for vec in row for x in vec)
        if detected is not None and field is not None and detected != field:
            raise DomainError(f"structure constants live in Q(sqrt({detected})), declared {field}")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "field", field if field is not None else detected)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    def __reduce__(self):
        return (LieAlgebra, (self.dim, self.c, self.field))

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[tuple[int, int], Sequence], field: int | None = None,
                      complete: bool = True) -> LieAlgebra:
        """Build from a partial bracket table; [e_j, e_i] = -[e_i, e_j] is filled in
        for pairs whose reverse is not listed."""
        c = [[list(_zero_vec(dim)) for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if len(coeffs) != dim:
                raise DomainError(f"bracket ({i},{j}) has {len(coeffs)} coefficients, expected {dim}")
            c[i][j] = list(coeffs)
        if complete:
            for (i, j), coeffs in brackets.items():
                if (j, i) not in brackets and i != j:
                    c[j][i] = [-_coerce(x, field) for x in coeffs]
        return cls(dim, c, field)

    @classmethod
    def abelian(cls, dim: int, field: int | None = None) -> LieAlgebra:
        return cls(dim, [[_zero_vec(dim) for _ in range(dim)] for _ in range(dim)], field)

    @classmethod
    def heisenberg(cls, field: int | None = None) -> LieAlgebra:
        """Basis X, Y, Z with [X, Y] = Z."""
        return cls.from_brackets(3, {(0, 1): (0, 0, 1)}, field)

    def with_field(self, field: int | None) -> LieAlgebra:
        return LieAlgebra(self.dim, self.c, field)

    # bracket -------------------------------------------------------------

    def bracket(self, u: Sequence, v: Sequence) -> Vector:
        n = self.dim
        out = [Fraction(0)] * n
        for i in range(n):
            if u[i] == 0:
                continue
            for j in range(n):
                if v[j] == 0:
                    continue
                s = u[i] * v[j]
                cij = self.c[i][j]
                for k in range(n):
                    if cij[k] != 0:
                        out[k] = out[k] + s * cij[k]
        return tuple(out)

    def basis_vector(self, i: int) -> Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def ad(self, x: Sequence) -> Matrix:
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(cols, self.dim) if cols else Matrix.zeros(0, 0)

    def is_abelian(self) -> bool:
        return all(x == 0 for row in self.c for vec in row for x in vec)

    # axioms ----------------------------------------------------------------

    def validate(self) -> Violation | None:
        """First violated axiom, or None. Antisymmetry is checked before Jacobi."""
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        return Violation("antisymmetry", (i, j),
                                         f"c[{i}][{j}][{k}]={self.c[i][j][k]} but c[{j}][{i}][{k}]={self.c[j][i][k]}")
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    t1 = self.bracket(e[i], self.bracket(e[j], e[k]))
                    t2 = self.bracket(e[j], self.bracket(e[k], e[i]))
                    t3 = self.bracket(e[k], self.bracket(e[i], e[j]))
                    s = tuple(a + b + c for a, b, c in zip(t1, t2, t3))
                    if any(x != 0 for x in s):
                        return Violation("jacobi", (i, j, k), f"cyclic sum = {[str(x) for x in s]}")
        return None

    def require_valid(self) -> None:
        v = self.validate()
        if v is not None:
            raise DomainError(f"invalid Lie algebra: {v}")

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self.c == other.c

    def __hash__(self):
        return hash((self.dim, self.c))

    def __repr__(self):
        nz = {(i, j): [str(x) for x in self.c[i][j]] for i in range(self.dim)
              for j in range(i + 1, self.dim) if any(x != 0 for x in self.c[i][j])}
        return f"LieAlgebra(dim={self.dim}, field={self.field}, brackets={nz})"

    # change of basis -------------------------------------------------------

    def change_basis(self, v: Matrix) -> LieAlgebra:
        """Same algebra in the basis given by the columns of an invertible V."""
        n = self.dim
        vinv = v.inverse()
        cols = v.columns()
        c = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                c[i][j] = vinv @ self.bracket(cols[i], cols[j])
        return LieAlgebra(n, c, self.field or v.field())


# --- subspaces and series -----------------------------------------------------


def span(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    return row_space_basis([v for v in vectors], dim)


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return len(row_space_basis(list(basis) + [v], len(v))) == len(basis)


def coordinates_in(basis: Sequence[Sequence], v: Sequence) -> tuple:
    """Coordinates of v in an RREF basis (read off at the pivots)."""
    out = []
    for b in basis:
        p = next(i for i, x in enumerate(b) if x != 0)
        out.append(v[p])
    recon = [Fraction(0)] * len(v)
    for coef, b in zip(out, basis):
        recon = [r + coef * x for r, x in zip(recon, b)]
    if any(a != b for a, b in zip(recon, v)):
        raise DomainError("vector is not in the span")
    return tuple(out)


def bracket_span(g: LieAlgebra, a: Sequence[Sequence], b: Sequence[Sequence]) -> list[Vector]:
    return span([g.bracket(x, y) for x in a for y in b], g.dim)


def derived_subalgebra(g: LieAlgebra) -> list[Vector]:
    """Echelon basis of [g, g]."""
    e = [g.basis_vector(i) for i in range(g.dim)]
    return bracket_span(g, e, e)


@dataclass(frozen=True)
class IdealChain:
    members: tuple[tuple[Vector, ...], ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.members)


def lower_central_series(g: LieAlgebra) -> tuple[IdealChain, bool, int]:
    """Chain g, [g,g], [g,[g,g]], ... until it stabilizes.

    Returns (chain, nilpotent, rank) where rank counts strict steps.
    """
    e = [g.basis_vector(i) for i in range(g.dim)]
    current = span(e, g.dim)
    members = [tuple(current)]
    while current:
        nxt = bracket_span(g, e, current)
        if len(nxt) == len(current):
            break
        members.append(tuple(nxt))
        current = nxt
    nilpotent = len(members[-1]) == 0
    return IdealChain(tuple(members)), nilpotent, len(members) - 1


def derived_series(g: LieAlgebra) -> IdealChain:
    current = span([g.basis_vector(i) for i in range(g.dim)], g.dim)
    members = [tuple(current)]
    while current:
        nxt = bracket_span(g, current, current)
        if len(nxt) == len(current):
            break
        members.append(tuple(nxt))
        current = nxt
    return IdealChain(tuple(members))


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[1]


def is_unimodular(g: LieAlgebra) -> bool:
    """trace(ad e_i) = 0 for every basis element."""
    return all(sum((g.c[i][k][k] for k in range(g.dim)), Fraction(0)) == 0 for i in range(g.dim))


def center(g: LieAlgebra) -> list[Vector]:
    n = g.dim
    if n == 0:
        return []
    # x central iff sum_i x_i c[i][j][k] = 0 for all j, k
    rows = [[g.c[i][j][k] for i in range(n)] for j in range(n) for k in range(n)]
    _, ker = rank_kernel(Matrix(rows, n))
    return span(ker, n)


def subalgebra(g: LieAlgebra, basis: Sequence[Sequence]) -> LieAlgebra:
    """Structure constants of a subalgebra in the given RREF basis."""
    m = len(basis)
    c = [[coordinates_in(basis, g.bracket(basis[i], basis[j])) for j in range(m)] for i in range(m)]
    return LieAlgebra(m, c, g.field)


@dataclass(frozen=True)
class Quotient:
    algebra: LieAlgebra
    projection: Matrix  # (dim g - dim I) x dim g, kernel = I
    section: Matrix     # dim g x (dim g - dim I), projection @ section = identity


def quotient(g: LieAlgebra, ideal: Sequence[Sequence]) -> Quotient:
    """g / I for an ideal I given by an RREF basis.

    Quotient coordinates are the non-pivot coordinates of I's echelon basis.
    """
    n = g.dim
    ideal = span(ideal, n)
    for x in ideal:
        for i in range(n):
            if not in_span(ideal, g.bracket(g.basis_vector(i), x)):
                raise DomainError("subspace is not an ideal")
    pivots = [next(i for i, x in enumerate(b) if x != 0) for b in ideal]
    free = [j for j in range(n) if j not in pivots]
    proj_rows = []
    for j in free:
        row = [Fraction(0)] * n
        row[j] = Fraction(1)
        for b, p in zip(ideal, pivots):
            row[p] = row[p] - b[j]
        proj_rows.append(row)
    proj = Matrix(proj_rows, n)
    section = Matrix.from_columns([g.basis_vector(j) for j in free], n) if free else Matrix.zeros(n, 0)
    m = len(free)
    c = [[proj @ g.bracket(g.basis_vector(free[s]), g.basis_vector(free[t])) for t in range(m)] for s in range(m)]
    return Quotient(LieAlgebra(m, c, g.field), proj, section)


def quotient_by_derived(g: LieAlgebra) -> tuple[LieAlgebra, Matrix]:
    q = quotient(g, derived_subalgebra(g))
    return q.algebra, q.projection


# --- automorphisms ------------------------------------------------------------


def is_homomorphism(src: LieAlgebra, dst: LieAlgebra, m: Matrix) -> tuple[int, int] | None:
    """First basis pair (i, j) with M[e_i, e_j] != [M e_i, M e_j], or None."""
    cols = m.columns() if m.cols else []
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = m @ src.bracket(src.basis_vector(i), src.basis_vector(j))
            rhs = dst.bracket(cols[i], cols[j])
            if tuple(lhs) != tuple(rhs):
                return i, j
    return None


class LieAutomorphism:
    """Invertible bracket-preserving linear map (matrix acts on column vectors)."""

    __slots__ = ("algebra", "matrix")

    def __init__(self, algebra: LieAlgebra, matrix: Matrix, *, check: bool = True):
        if matrix.shape != (algebra.dim, algebra.dim):
            raise NotAnAutomorphism(f"matrix shape {matrix.shape} does not match dim {algebra.dim}")
        if check:
            if matrix.det() == 0:
                raise NotAnAutomorphism("matrix is singular")
            bad = is_homomorphism(algebra, algebra, matrix)
            if bad is not None:
                raise NotAnAutomorphism(f"bracket not preserved on basis pair {bad}")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("LieAutomorphism is immutable")

    def __reduce__(self):
        return (LieAutomorphism, (self.algebra, self.matrix))

    @classmethod
    def identity(cls, g: LieAlgebra) -> LieAutomorphism:
        return cls(g, Matrix.identity(g.dim), check=False)

    def compose(self, other: LieAutomorphism) -> LieAutomorphism:
        """self after other."""
        return LieAutomorphism(self.algebra, self.matrix @ other.matrix, check=False)

    def inverse(self) -> LieAutomorphism:
        return LieAutomorphism(self.algebra, self.matrix.inverse(), check=False)

    def det(self):
        return self.matrix.det()

    def __repr__(self):
        return f"LieAutomorphism({self.matrix!r})"


def restrict_and_descend(f: LieAutomorphism) -> tuple[LieAutomorphism, LieAutomorphism]:
    """Restriction to [g, g] (in its echelon basis) and the induced map on g/[g, g]."""
    g = f.algebra
    d = derived_subalgebra(g)
    sub = subalgebra(g, d)
    fm = f.matrix
    cols = [coordinates_in(d, fm @ v) for v in d]
    f_derived = Matrix.from_columns(cols, len(d)) if cols else Matrix.zeros(0, 0)
    q = quotient(g, d)
    f_ab = q.projection @ fm @ q.section if q.algebra.dim else Matrix.zeros(0, 0)
    return LieAutomorphism(sub, f_derived, check=False), LieAutomorphism(q.algebra, f_ab, check=False)

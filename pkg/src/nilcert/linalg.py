"""Dense exact linear algebra over Q and Q(sqrt(p)).

Entries are Fraction or QuadExt. Vectors are column vectors; a Matrix acts
by left multiplication. Compound (exterior power) matrices index rows and
columns by k-subsets in lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .exact.poly import UniPoly
from .exact.quad import QuadExt, field_of


def _scalar(x):
    if isinstance(x, (Fraction, QuadExt)):
        return x
    return Fraction(x)


class Matrix:
    """Immutable rows x cols matrix of exact scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        entries = tuple(tuple(_scalar(x) for x in row) for row in data)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    def __reduce__(self):
        return (Matrix, (self.entries, self.cols))

    # constructors --------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(([Fraction(int(i == j)) for j in range(n)] for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Matrix:
        return cls(([Fraction(0)] * cols for _ in range(rows)), cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int | None = None) -> Matrix:
        if not columns:
            return cls.zeros(rows or 0, 0)
        n = len(columns[0])
        return cls(([c[i] for c in columns] for i in range(n)), len(columns))

    @classmethod
    def diag(cls, values: Sequence) -> Matrix:
        n = len(values)
        return cls(([values[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)), n)

    # access --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.entries]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
        return Matrix(([self.entries[i][j] for j in cols] for i in rows), len(cols))

    def field(self) -> int | None:
        return field_of(x for r in self.entries for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_integer(self) -> bool:
        for r in self.entries:
            for x in r:
                if isinstance(x, QuadExt):
                    if x.b != 0 or x.a.denominator != 1:
                        return False
                elif x.denominator != 1:
                    return False
        return True

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"Matrix({[[str(x) for x in r] for r in self.entries]})"

    # arithmetic ----------------------------------------------------------

    @property
    def T(self) -> Matrix:
        return Matrix((self.column(j) for j in range(self.cols)), self.rows)

    def __add__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(([a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)), self.cols)

    def __sub__(self, other: Matrix) -> Matrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix(([a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)), self.cols)

    def __neg__(self) -> Matrix:
        return Matrix(([-a for a in r] for r in self.entries), self.cols)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return Matrix(
                ([_dot(r, c) for c in ocols] for r in self.entries), other.cols
            )
        # vector
        vec = list(other)
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(_dot(r, vec) for r in self.entries)

    def scale(self, s) -> Matrix:
        return Matrix(([s * a for a in r] for r in self.entries), self.cols)

    def __pow__(self, n: int) -> Matrix:
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def trace(self):
        acc = Fraction(0)
        for i in range(min(self.rows, self.cols)):
            acc = acc + self.entries[i][i]
        return acc

    # elimination-backed ------------------------------------------------

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return det_fraction_free(self.tolist())

    def rank(self) -> int:
        return len(echelon(self.tolist())[1])

    def inverse(self) -> Matrix:
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self.entries)]
        red, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return Matrix(([x for x in red[i][n:]] for i in range(n)), n)

    def solve(self, rhs: Matrix) -> Matrix:
        """X with self @ X == rhs; raises ValueError when inconsistent."""
        m, n = self.shape
        aug = [list(self.entries[i]) + list(rhs.entries[i]) for i in range(m)]
        red, piv = rref(aug)
        if any(p >= n for p in piv):
            raise ValueError("inconsistent linear system")
        out = [[Fraction(0)] * rhs.cols for _ in range(n)]
        for r, p in enumerate(piv):
            out[p] = list(red[r][n:])
        return Matrix(out, rhs.cols)


def _dot(a: Sequence, b: Sequence):
    acc = Fraction(0)
    for x, y in zip(a, b):
        if x != 0 and y != 0:
            acc = acc + x * y
    return acc


# --- fraction-free elimination ----------------------------------------------


def det_fraction_free(rows: list[list]) -> Fraction | QuadExt:
    """Bareiss determinant; every intermediate division is exact."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (akk * row_i[j] - aik * row_k[j]) / prev
            row_i[k] = Fraction(0)
        prev = akk
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def echelon(rows: list[list]) -> tuple[list[list], list[int]]:
    """Fraction-free row echelon form (Bareiss-style updates) and pivot columns."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    prev = Fraction(1)
    for c in range(n):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        for i in range(r + 1, m):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, n):
                row_i[j] = (arc * row_i[j] - aic * row_r[j]) / prev
            row_i[c] = Fraction(0)
        prev = arc
        pivots.append(c)
        r += 1
    return a, pivots


def rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form: fraction-free forward pass, then back-substitution."""
    a, pivots = echelon(rows)
    n = len(a[0]) if a else 0
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv if x != 0 else x for x in a[r]]
        for i in range(r):
            f = a[i][c]
            if f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
    zero = Fraction(0)
    a = a[: len(pivots)] + [[zero] * n for _ in range(len(a) - len(pivots))]
    return a, pivots


def rank_kernel(m: Matrix) -> tuple[int, list[tuple]]:
    """Rank and a kernel basis (one vector per free column, unit at that column)."""
    if m.rows == 0:
        return 0, [tuple(Fraction(int(i == j)) for i in range(m.cols)) for j in range(m.cols)]
    red, piv = rref(m.tolist())
    free = [j for j in range(m.cols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, p in enumerate(piv):
            v[p] = -red[r][f]
        basis.append(tuple(v))
    return len(piv), basis


def row_space_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """Reduced echelon basis of the span (pivot order = coordinate order)."""
    if not vectors:
        return []
    red, piv = rref([list(map(_scalar, v)) for v in vectors])
    return [tuple(red[i]) for i in range(len(piv))]


# --- characteristic polynomial and compound matrices ------------------------


def char_poly_coeffs(m: Matrix) -> list:
    """Faddeev-LeVerrier: coefficients of det(xI - M), lowest degree first."""
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    aux = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        aux = m @ aux + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m @ aux).trace() / k
    return coeffs


def char_poly(m: Matrix) -> UniPoly:
    """Monic characteristic polynomial det(xI - M) of a rational matrix."""
    coeffs = char_poly_coeffs(m)
    if any(isinstance(c, QuadExt) and c.b != 0 for c in coeffs):
        raise ValueError("characteristic polynomial is not rational")
    return UniPoly(c.a if isinstance(c, QuadExt) else c for c in coeffs)


def subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


def compound(m: Matrix, k: int) -> Matrix:
    """k-th compound: all k x k minors, rows and columns lexicographic (any shape)."""
    if not 0 <= k <= min(m.rows, m.cols):
        raise ValueError(f"k={k} out of range for shape {m.shape}")
    rs, cs = subsets(m.rows, k), subsets(m.cols, k)
    ent = m.entries
    return Matrix(
        ([det_fraction_free([[ent[i][j] for j in J] for i in I]) for J in cs] for I in rs),
        len(cs),
    )


def exterior_power(m: Matrix, k: int) -> Matrix:
    """Matrix of the induced map on the k-th exterior power."""
    if not m.is_square():
        raise ValueError("exterior power of a non-square matrix")
    if not 0 <= k <= m.rows:
        raise ValueError(f"k={k} out of range for n={m.rows}")
    return compound(m, k)


# --- integer lattices ---------------------------------------------------------


def _int_rows(m: Matrix) -> list[list[int]]:
    if not m.is_integer():
        raise ValueError("matrix has non-integer entries")
    return [[int(x.a if isinstance(x, QuadExt) else x) for x in r] for r in m.entries]


def hermite_normal_form(b: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style HNF: H = U @ B with U unimodular.

    H is upper echelon, pivots positive, entries above a pivot reduced into
    [0, pivot), zero rows last.
    """
    a = _int_rows(b)
    m, n = b.rows, b.cols
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    pivots = []
    for c in range(n):
        if r >= m:
            break
        # gcd-combine rows r..m-1 in column c
        while True:
            nz = [i for i in range(r, m) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if a[i][c] != 0:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        pv = a[r][c]
        for i in range(r):
            q = a[i][c] // pv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        pivots.append(c)
        r += 1
    return Matrix(a, n), Matrix(u, m)


@dataclass(frozen=True)
class IntLattice:
    """Integer lattice given by linearly independent basis rows in HNF."""

    ambient: int
    basis: Matrix

    @classmethod
    def from_generators(cls, gens: Matrix) -> IntLattice:
        h, _ = hermite_normal_form(gens)
        rows = [r for r in h.entries if any(x != 0 for x in r)]
        return cls(gens.cols, Matrix(rows, gens.cols))

    @classmethod
    def standard(cls, n: int) -> IntLattice:
        return cls(n, Matrix.identity(n))

    @property
    def rank(self) -> int:
        return self.basis.rows

    def contains(self, v: Sequence) -> bool:
        if self.rank == 0:
            return all(x == 0 for x in v)
        try:
            coeffs = self.basis.T.solve(Matrix([[x] for x in v], 1))
        except ValueError:
            return False
        return coeffs.is_integer()

    def is_full(self) -> bool:
        return self.rank == self.ambient

    def index(self) -> int:
        if not self.is_full():
            raise ValueError("index of a non-full lattice")
        return abs(int(self.basis.det()))


def saturate(vectors: Sequence[Sequence], dim: int) -> IntLattice:
    """Z^dim intersected with the rational span of the given vectors."""
    span = row_space_basis(vectors, dim) if vectors else []
    if not span:
        return IntLattice(dim, Matrix.zeros(0, dim))
    # equations cutting out the span: kernel of the span matrix, scaled to integers
    _, eqs = rank_kernel(Matrix(span, dim))
    if not eqs:
        return IntLattice.standard(dim)
    eq_int = [_clear_denominators(e) for e in eqs]
    # left integer kernel of the dim x len(eqs) matrix E^T via HNF transform
    et = Matrix(eq_int, dim).T
    h, u = hermite_normal_form(et)
    rows = [u.row(i) for i in range(h.rows) if all(x == 0 for x in h.row(i))]
    return IntLattice.from_generators(Matrix(rows, dim))


def _clear_denominators(v: Sequence[Fraction]) -> list[int]:
    from math import lcm
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    return [int(Fraction(x) * den) for x in v]


def complete_to_unimodular(basis: Matrix) -> Matrix:
    """Unimodular V whose first r columns span the same lattice as the r basis rows.

    The rows must span a saturated lattice.
    """
    r, n = basis.shape
    if r == 0:
        return Matrix.identity(n)
    h, u = hermite_normal_form(basis.T)
    t = h.submatrix(range(r), range(r))
    if abs(t.det()) != 1:
        raise ValueError("lattice is not saturated")
    return u.inverse()

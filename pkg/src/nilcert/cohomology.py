"""Chevalley-Eilenberg cohomology with trivial coefficients.

Sign convention for the differential on k-cochains:

    dw(x_0, ..., x_k) = sum_{i<j} (-1)^(i+j) w([x_i, x_j], x_0, ..., ^x_i, ..., ^x_j, ..., x_k)

so on the Heisenberg algebra [X, Y] = Z one gets d(Z*) = -X* ^ Y*.
Cochains in degree k are coefficient vectors in the lexicographic basis
e^I (I a sorted k-subset). Automorphisms act by pullback:
(F^* w)(x, ...) = w(Fx, ...), whose matrix is the transposed k-th compound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .liealg import LieAlgebra, LieAutomorphism
from .linalg import Matrix, compound, rank_kernel, row_space_basis, subsets


def _perm_sign(seq: list[int]) -> int:
    """Sign of the permutation sorting seq (assumed distinct)."""
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def differential(g: LieAlgebra, k: int) -> Matrix:
    """d_k : Lambda^k g* -> Lambda^(k+1) g* as a C(n,k+1) x C(n,k) matrix."""
    n = g.dim
    src = subsets(n, k)
    dst = subsets(n, k + 1)
    index = {I: i for i, I in enumerate(src)}
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for r, J in enumerate(dst):
        for a in range(len(J)):
            for b in range(a + 1, len(J)):
                sab = -1 if (a + b) % 2 else 1
                rest = [J[t] for t in range(len(J)) if t != a and t != b]
                cvec = g.c[J[a]][J[b]]
                for m in range(n):
                    if cvec[m] == 0 or m in rest:
                        continue
                    seq = [m] + rest
                    I = tuple(sorted(seq))
                    col = index[I]
                    rows[r][col] = rows[r][col] + sab * _perm_sign(seq) * cvec[m]
    return Matrix(rows, len(src)) if dst else Matrix.zeros(0, len(src))


@dataclass(frozen=True)
class CEComplex:
    algebra: LieAlgebra
    differentials: tuple[Matrix, ...]  # d_0 .. d_{n-1}

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def d(self, k: int) -> Matrix:
        """d_k, with d_{-1} and d_n the zero maps of the right shape."""
        n = self.dim
        from math import comb
        if k < 0:
            return Matrix.zeros(1, 0)
        if k >= n:
            return Matrix.zeros(0, comb(n, k) if k <= n else 0)
        return self.differentials[k]


def build_complex(g: LieAlgebra) -> CEComplex:
    """All differentials, verifying d_{k+1} d_k = 0."""
    ds = tuple(differential(g, k) for k in range(g.dim))
    for k in range(len(ds) - 1):
        if not (ds[k + 1] @ ds[k]).is_zero():
            raise DomainError(f"d_{k + 1} d_{k} != 0; input is not a Lie algebra")
    return CEComplex(g, ds)


@lru_cache(maxsize=256)
def _complex(g: LieAlgebra) -> CEComplex:
    return build_complex(g)


def _check_degree(g: LieAlgebra, k: int) -> None:
    if not 0 <= k <= g.dim:
        raise DomainError(f"degree {k} out of range 0..{g.dim}")


def betti(g: LieAlgebra, k: int) -> int:
    _check_degree(g, k)
    cx = _complex(g)
    dk, dprev = cx.d(k), cx.d(k - 1)
    ker = dk.cols - (dk.rank() if dk.rows else 0)
    im = dprev.rank() if dprev.rows and dprev.cols else 0
    return ker - im


def betti_numbers(g: LieAlgebra) -> tuple[int, ...]:
    return tuple(betti(g, k) for k in range(g.dim + 1))


def cocycle_basis(g: LieAlgebra, k: int) -> tuple[list[tuple], list[tuple]]:
    """(basis of B^k in echelon form, representatives of H^k).

    Representatives are kernel vectors of d_k, scanned in pivot order, kept
    whenever they raise the rank over the span of B^k and earlier picks.
    """
    _check_degree(g, k)
    cx = _complex(g)
    dk, dprev = cx.d(k), cx.d(k - 1)
    width = dk.cols
    if dk.rows:
        _, ker = rank_kernel(dk)
    else:
        ker = [tuple(Fraction(int(i == j)) for i in range(width)) for j in range(width)]
    im = row_space_basis(dprev.columns(), width) if dprev.cols and dprev.rows else []
    reps: list[tuple] = []
    current = list(im)
    for v in ker:
        if len(row_space_basis(current + [v], width)) > len(current):
            reps.append(v)
            current.append(v)
    return im, reps


def pullback_matrix(f: LieAutomorphism, k: int) -> Matrix:
    """Matrix of F^* on Lambda^k g* (transpose of the k-th compound)."""
    return compound(f.matrix, k).T


def induced_action(f: LieAutomorphism, k: int) -> Matrix:
    """Pullback on H^k in the representative basis of :func:`cocycle_basis`."""
    g = f.algebra
    im, reps = cocycle_basis(g, k)
    if not reps:
        return Matrix.zeros(0, 0)
    pb = pullback_matrix(f, k)
    basis = Matrix.from_columns(list(im) + reps, pb.rows)
    images = Matrix.from_columns([pb @ r for r in reps], pb.rows)
    coords = basis.solve(images)
    h = len(im)
    return Matrix([coords.row(h + i) for i in range(len(reps))], len(reps))


@dataclass(frozen=True)
class TopActionScalar:
    value: object  # Fraction or QuadExt
    convention: str = "pullback"

    def __post_init__(self):
        if self.value == 0:
            raise DomainError("top action scalar must be nonzero")


def top_action(f: LieAutomorphism) -> TopActionScalar:
    """Scalar by which F^* acts on the one-dimensional H^l; equals det F."""
    g = f.algebra
    if betti(g, g.dim) != 1:
        raise DomainError("top cohomology is not one-dimensional (algebra not unimodular)")
    return TopActionScalar(f.matrix.det() if g.dim else Fraction(1))

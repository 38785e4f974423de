"""Random nilpotent Lie algebras and lattice-automorphism problems for property tests.

Everything is driven by an explicit ``random.Random`` so runs are reproducible.

Algebras come from two samplers:

* ``"rejection"``: strictly upper triangular templates (c[i][j][k] = 0 unless
  k > max(i, j)) with sparse small integer entries, kept only if Jacobi holds.
* ``"extension"``: iterated central extensions by random integer 2-cocycles,
  which always satisfy Jacobi and reach deeper nilpotency ranks.

Problems come from families with explicitly known lattice automorphisms:
abelian Z^m, Heisenberg + R^j, filiform(4) + R^j and the free 3-step algebra
on two generators. The quotient g = h/K uses an F-invariant ideal K, which may
be an eigenline over a real quadratic field, so proj can be irrational.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .certify import LatticeAutomorphismProblem
from .cohomology import differential
from .exact.quad import QuadExt, squarefree_decomposition
from .liealg import LieAlgebra, LieAutomorphism, is_homomorphism, quotient, span
from .linalg import Matrix, rank_kernel, subsets, _clear_denominators


# --- algebras -----------------------------------------------------------------


def random_upper_template(rng: random.Random, dim: int, density: float = 0.3, max_tries: int = 2000) -> LieAlgebra | None:
    """Rejection sampling of strictly upper triangular structure constants."""
    for _ in range(max_tries):
        brackets = {}
        for i in range(dim):
            for j in range(i + 1, dim):
                coeffs = [0] * dim
                for k in range(j + 1, dim):
                    if rng.random() < density:
                        coeffs[k] = rng.choice((-2, -1, 1, 1, 2))
                if any(coeffs):
                    brackets[(i, j)] = coeffs
        g = LieAlgebra.from_brackets(dim, brackets)
        if g.validate() is None:
            return g
    return None


def central_extension(g: LieAlgebra, cocycle: dict[tuple[int, int], int]) -> LieAlgebra:
    """g + R z with [x, y]' = [x, y] + w(x, y) z."""
    n = g.dim
    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            coeffs = list(g.c[i][j]) + [Fraction(cocycle.get((i, j), 0))]
            if any(c != 0 for c in coeffs):
                brackets[(i, j)] = coeffs
    return LieAlgebra.from_brackets(n + 1, brackets)


def random_cocycle(rng: random.Random, g: LieAlgebra) -> dict[tuple[int, int], int]:
    """Random integer combination of a basis of closed 2-forms."""
    n = g.dim
    if n < 2:
        return {}
    d2 = differential(g, 2)
    if d2.rows:
        _, ker = rank_kernel(d2)
    else:
        ker = [tuple(Fraction(int(i == j)) for i in range(d2.cols)) for j in range(d2.cols)]
    pairs = subsets(n, 2)
    out = [0] * len(pairs)
    for v in ker:
        c = rng.choice((-1, 0, 0, 1, 2))
        if c:
            iv = _clear_denominators(v)
            out = [a + c * b for a, b in zip(out, iv)]
    return {pairs[i]: out[i] for i in range(len(pairs)) if out[i]}


def random_extension_algebra(rng: random.Random, dim: int) -> LieAlgebra:
    base = rng.randint(min(2, dim), max(min(3, dim), min(2, dim)))
    g = LieAlgebra.abelian(base)
    while g.dim < dim:
        g = central_extension(g, random_cocycle(rng, g))
    return g


def random_nilpotent(rng: random.Random, dim: int, method: str = "extension") -> LieAlgebra:
    if method == "rejection":
        g = random_upper_template(rng, dim)
        if g is not None:
            return g
        method = "extension"
    if method == "extension":
        return random_extension_algebra(rng, dim)
    raise ValueError(f"unknown method {method!r}")


# --- integer matrices ---------------------------------------------------------


def random_unimodular(rng: random.Random, n: int, steps: int | None = None) -> Matrix:
    """Product of a few elementary integer operations (det +-1, small entries)."""
    m = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        if n == 1 and rng.random() < 0.5:
            m[0][0] = -1
        return Matrix(m, n)
    for _ in range(steps if steps is not None else n + 1):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-1, 1))
        m[i] = [a + c * b for a, b in zip(m[i], m[j])]
    if rng.random() < 0.3:
        i = rng.randrange(n)
        m[i] = [-a for a in m[i]]
    return Matrix(m, n)


_S = ((1, 1), (0, 1))
_T = ((1, 0), (1, 1))
_R = ((0, 1), (1, 0))


def _mul2(a, b):
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def hyperbolic_block(rng: random.Random) -> tuple[tuple[int, int], tuple[int, int]]:
    """Integer 2x2 matrix with det +-1 and irrational real eigenvalues."""
    while True:
        m = ((1, 0), (0, 1))
        for _ in range(rng.randint(2, 4)):
            m = _mul2(m, rng.choice((_S, _T, _S, _T, _R)))
        if rng.random() < 0.3:
            m = tuple(tuple(-x for x in r) for r in m)
        t = m[0][0] + m[1][1]
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if (det == 1 and abs(t) >= 3) or (det == -1 and t != 0):
            return m


def block_eigenvector(block) -> tuple[QuadExt, tuple[QuadExt, QuadExt]]:
    """A real eigenvalue of a hyperbolic block in Q(sqrt(d)) and an eigenvector."""
    (a, b), (c, d) = block
    t, det = a + d, a * d - b * c
    disc = t * t - 4 * det
    s, sq = squarefree_decomposition(disc)
    lam = QuadExt(Fraction(t, 2), Fraction(s, 2), sq)
    if b != 0:
        v = (QuadExt(b, 0, sq), lam - a)
    else:
        v = (lam - d, QuadExt(c, 0, sq))
    return lam, v


# --- families -----------------------------------------------------------------


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    h: LieAlgebra
    F: Matrix
    K: tuple[tuple, ...]       # basis of an F-invariant ideal (possibly over Q(sqrt(d)))
    k_kind: str
    characteristic: bool       # K invariant under every automorphism the family samples


def _vec(n, entries: dict) -> tuple:
    return tuple(entries.get(i, 0) for i in range(n))


def _embed(n, offset, v) -> tuple:
    out = [0] * n
    for i, x in enumerate(v):
        out[offset + i] = x
    return tuple(out)


def _abelian_blocks(rng: random.Random, m: int) -> list[int]:
    sizes = []
    while sum(sizes) < m:
        sizes.append(2 if m - sum(sizes) >= 2 and rng.random() < 0.7 else 1)
    return sizes


def _block_upper(rng: random.Random, sizes: list[int], blocks: list) -> list[list[int]]:
    m = sum(sizes)
    f = [[0] * m for _ in range(m)]
    off = 0
    offsets = []
    for s, b in zip(sizes, blocks):
        offsets.append(off)
        for i in range(s):
            for j in range(s):
                f[off + i][off + j] = b[i][j]
        off += s
    for bi in range(len(sizes)):
        for bj in range(bi + 1, len(sizes)):
            for i in range(sizes[bi]):
                for j in range(sizes[bj]):
                    if rng.random() < 0.4:
                        f[offsets[bi] + i][offsets[bj] + j] = rng.choice((-1, 1, 2))
    return f


def _sample_blocks(rng: random.Random, sizes: list[int]) -> list:
    return [hyperbolic_block(rng) if s == 2 else ((rng.choice((-1, 1)),),) for s in sizes]


def abelian_family(rng: random.Random, m: int, f_only: bool = False, shape=None) -> FamilyInstance:
    sizes = shape or _abelian_blocks(rng, m)
    blocks = _sample_blocks(rng, sizes)
    F = Matrix(_block_upper(rng, sizes, blocks), m)
    h = LieAlgebra.abelian(m)
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    cut = rng.randrange(len(sizes) + 1)
    K = [_vec(m, {i: 1}) for i in range(offsets[cut] if cut < len(sizes) else m)]
    kind = f"flag{cut}"
    if cut < len(sizes) and sizes[cut] == 2 and rng.random() < 0.8:
        _, v = block_eigenvector(blocks[cut])
        K.append(_embed(m, offsets[cut], v))
        kind += "+eigenline"
    return FamilyInstance("abelian", h, F, tuple(K), kind, cut == 0 and "eigen" not in kind or len(K) == m)


def heisenberg_family(rng: random.Random, j: int) -> FamilyInstance:
    n = 3 + j
    h = LieAlgebra.from_brackets(n, {(0, 1): _vec(n, {2: 1})})
    hyper = rng.random() < 0.7
    M = hyperbolic_block(rng) if hyper else rng.choice((((1, 1), (0, 1)), ((1, 0), (0, 1)), ((0, 1), (1, 0)), ((-1, 0), (0, 1))))
    detm = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    wsizes = _abelian_blocks(rng, j) if j else []
    wblocks = _sample_blocks(rng, wsizes)
    N = _block_upper(rng, wsizes, wblocks) if j else []

    options = ["zero", "center_z", "center"]
    if j and wsizes[0] == 2:
        options.append("w_eigenline")
    if hyper:
        options.append("xy_eigenline")
    kind = rng.choice(options)
    no_t = kind == "w_eigenline"
    no_s = kind == "xy_eigenline"

    cols = []
    for c in range(2):
        col = {0: M[0][c], 1: M[1][c], 2: rng.choice((-1, 0, 1, 2))}
        if not no_s:
            for w in range(j):
                if rng.random() < 0.4:
                    col[3 + w] = rng.choice((-1, 1))
        cols.append(_vec(n, col))
    cols.append(_vec(n, {2: detm}))
    for w in range(j):
        col = {3 + r: N[r][w] for r in range(j)}
        if not no_t and rng.random() < 0.5:
            col[2] = rng.choice((-1, 1))
        cols.append(_vec(n, col))
    F = Matrix.from_columns(cols, n)

    if kind == "zero":
        K, char = [], True
    elif kind == "center_z":
        K, char = [_vec(n, {2: 1})], True
    elif kind == "center":
        K, char = [_vec(n, {i: 1}) for i in range(2, n)], True
    elif kind == "w_eigenline":
        _, v = block_eigenvector(wblocks[0])
        K, char = [_embed(n, 3, v)], False
    else:
        _, v = block_eigenvector(M)
        K, char = [_vec(n, {2: 1}), _embed(n, 0, v)], False
    return FamilyInstance("heisenberg", h, F, tuple(K), kind, char)


def filiform_family(rng: random.Random, j: int) -> FamilyInstance:
    n = 4 + j
    h = LieAlgebra.from_brackets(n, {(0, 1): _vec(n, {2: 1}), (0, 2): _vec(n, {3: 1})})
    a, d = rng.choice((-1, 1)), rng.choice((-1, 1))
    fe1 = {0: a, 1: rng.choice((-1, 0, 1)), 2: rng.choice((-1, 0, 1)), 3: rng.choice((-1, 0, 1))}
    fe2 = {1: d, 2: rng.choice((-1, 0, 1)), 3: rng.choice((-1, 0, 1))}
    for w in range(j):
        fe1[4 + w] = rng.choice((-1, 0, 1))
        fe2[4 + w] = rng.choice((-1, 0, 1))
    v1, v2 = _vec(n, fe1), _vec(n, fe2)
    v3 = h.bracket(v1, v2)
    v4 = h.bracket(v1, v3)
    ws = [_vec(n, {4 + w: rng.choice((-1, 1)), 3: rng.choice((-1, 0, 1))}) for w in range(j)]
    F = Matrix.from_columns([v1, v2, v3, v4] + ws, n)
    kind = rng.choice(["zero", "gamma3", "derived", "center"])
    K = {"zero": [], "gamma3": [_vec(n, {3: 1})], "derived": [_vec(n, {2: 1}), _vec(n, {3: 1})],
         "center": [_vec(n, {3: 1})] + [_vec(n, {4 + w: 1}) for w in range(j)]}[kind]
    return FamilyInstance("filiform", h, F, tuple(K), kind, True)


def free3_family(rng: random.Random) -> FamilyInstance:
    n = 5
    h = LieAlgebra.from_brackets(n, {(0, 1): _vec(n, {2: 1}), (0, 2): _vec(n, {3: 1}), (1, 2): _vec(n, {4: 1})})
    hyper = rng.random() < 0.7
    M = hyperbolic_block(rng) if hyper else rng.choice((((1, 1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, -1))))
    fx = _vec(n, {0: M[0][0], 1: M[1][0], 2: rng.choice((-1, 0, 1)), 3: rng.choice((-1, 0, 1)), 4: rng.choice((-1, 0, 1))})
    fy = _vec(n, {0: M[0][1], 1: M[1][1], 2: rng.choice((-1, 0, 1)), 3: rng.choice((-1, 0, 1)), 4: rng.choice((-1, 0, 1))})
    fz = h.bracket(fx, fy)
    F = Matrix.from_columns([fx, fy, fz, h.bracket(fx, fz), h.bracket(fy, fz)], n)
    options = ["zero", "gamma3", "derived"] + (["uv_eigenline"] if hyper else [])
    kind = rng.choice(options)
    if kind == "uv_eigenline":
        _, v = block_eigenvector(M)
        K, char = [_embed(n, 3, v)], False
    else:
        K = {"zero": [], "gamma3": [_vec(n, {3: 1}), _vec(n, {4: 1})],
             "derived": [_vec(n, {2: 1}), _vec(n, {3: 1}), _vec(n, {4: 1})]}[kind]
        char = True
    return FamilyInstance("free3", h, F, tuple(K), kind, char)


def random_family(rng: random.Random, max_dim: int = 5) -> FamilyInstance:
    choices: list[Callable[[], FamilyInstance]] = [lambda: abelian_family(rng, rng.randint(1, max_dim))]
    if max_dim >= 3:
        choices.append(lambda: heisenberg_family(rng, rng.randint(0, max_dim - 3)))
    if max_dim >= 4:
        choices.append(lambda: filiform_family(rng, rng.randint(0, max_dim - 4)))
    if max_dim >= 5:
        choices.append(lambda: free3_family(rng))
    return rng.choice(choices)()


# --- problems -----------------------------------------------------------------


def problem_from(inst: FamilyInstance, F: Matrix | None = None, U: Matrix | None = None) -> LatticeAutomorphismProblem:
    """Quotient by K, then conjugate everything by the unimodular U (scrambling the lattice basis)."""
    F = inst.F if F is None else F
    h = inst.h
    q = quotient(h, list(inst.K)) if inst.K else None
    if q is None:
        proj, g = Matrix.identity(h.dim), h
    else:
        proj, g = q.projection, q.algebra
    if U is not None:
        h = h.change_basis(U)
        F = U.inverse() @ F @ U
        proj = proj @ U
    return LatticeAutomorphismProblem(h, F, proj, g)


@dataclass(frozen=True)
class RandomProblem:
    problem: LatticeAutomorphismProblem
    instance: FamilyInstance
    U: Matrix


def random_problem(rng: random.Random, max_dim: int = 5) -> RandomProblem:
    inst = random_family(rng, max_dim)
    U = random_unimodular(rng, inst.h.dim)
    return RandomProblem(problem_from(inst, U=U), inst, U)


def random_problem_pair(rng: random.Random, max_dim: int = 5) -> tuple[LatticeAutomorphismProblem, LatticeAutomorphismProblem, LatticeAutomorphismProblem]:
    """(problem for F, problem for G, problem for F G), sharing h, K and the lattice basis.

    G is a power of F, or an independent automorphism from the same family
    when K is invariant under all of them.
    """
    inst = random_family(rng, max_dim)
    U = random_unimodular(rng, inst.h.dim)
    G = None
    if inst.characteristic and rng.random() < 0.5:
        # resample the family with the same shape until the algebra matches
        for _ in range(50):
            other = _resample(rng, inst)
            if other is not None and other.h == inst.h and other.K == inst.K:
                G = other.F
                break
    if G is None:
        G = inst.F ** rng.choice((-2, -1, 1, 2))
    return problem_from(inst, U=U), problem_from(inst, G, U), problem_from(inst, inst.F @ G, U)


def _resample(rng: random.Random, inst: FamilyInstance) -> FamilyInstance | None:
    n = inst.h.dim
    for _ in range(20):
        if inst.family == "abelian":
            cand = abelian_family(rng, n)
        elif inst.family == "heisenberg":
            cand = heisenberg_family(rng, n - 3)
        elif inst.family == "filiform":
            cand = filiform_family(rng, n - 4)
        else:
            cand = free3_family(rng)
        if cand.K == inst.K and cand.characteristic:
            return cand
    return None

"""Unipotent groups over Q(sqrt(p)) and the two-step lattice family Gamma(p, k).

Points of the 3x3 upper unitriangular group are written (x, y, z) with
matrix [[1, x, z], [0, 1, y], [0, 0, 1]]; the product is
(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y').

Gamma(p, k) is generated by A1 = (1, 0, 0), A2 = (0, 1, 0),
A3 = (k sqrt(p), 0, 0) and A4 = (0, k sqrt(p), 0). With R_k = Z + k Z sqrt(p)
(a ring, since (k sqrt(p))^2 = k^2 p is an integer), Gamma(p, k) is exactly
the set of points with x, y, z in R_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Sequence

from .errors import DomainError, LatticeError, NotAUnit
from .exact.quad import QuadExt, is_squarefree
from .linalg import Matrix, rank_kernel, row_space_basis

Scalar = object  # Fraction | QuadExt


def _q(x, p: int) -> QuadExt:
    if isinstance(x, QuadExt):
        if x.p != p and x.b != 0:
            raise DomainError(f"coordinate {x} is not in Q(sqrt({p}))")
        return x if x.p == p else QuadExt(x.a, 0, p)
    return QuadExt(Fraction(x), 0, p)


# --- unipotent matrices -------------------------------------------------------


class Unipotent:
    """Upper unitriangular matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Matrix):
        n = matrix.rows
        if not matrix.is_square():
            raise DomainError("unipotent matrix must be square")
        for i in range(n):
            if matrix[i, i] != 1:
                raise DomainError("diagonal entries must be 1")
            for j in range(i):
                if matrix[i, j] != 0:
                    raise DomainError("strictly lower part must vanish")
        object.__setattr__(self, "matrix", matrix)

    def __setattr__(self, name, value):
        raise AttributeError("Unipotent is immutable")

    def __reduce__(self):
        return (Unipotent, (self.matrix,))

    @property
    def n(self) -> int:
        return self.matrix.rows

    def __matmul__(self, other: Unipotent) -> Unipotent:
        return Unipotent(self.matrix @ other.matrix)

    def inverse(self) -> Unipotent:
        # (I + N)^-1 = sum (-N)^k
        n = self.n
        nil = self.matrix - Matrix.identity(n)
        acc = Matrix.identity(n)
        term = Matrix.identity(n)
        for _ in range(1, n):
            term = term @ (-nil)
            acc = acc + term
        return Unipotent(acc)

    def commutator(self, other: Unipotent) -> Unipotent:
        """[g, h] = g h g^-1 h^-1."""
        return self @ other @ self.inverse() @ other.inverse()

    def __eq__(self, other):
        return isinstance(other, Unipotent) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Unipotent({self.matrix!r})"


def u_log(g: Unipotent) -> Matrix:
    """log(I + N) = sum_{k>=1} (-1)^(k+1) N^k / k, finite since N^n = 0."""
    n = g.n
    nil = g.matrix - Matrix.identity(n)
    acc = Matrix.zeros(n, n)
    term = Matrix.identity(n)
    for k in range(1, n):
        term = term @ nil
        acc = acc + term.scale(Fraction((-1) ** (k + 1), k))
    return acc


def u_exp(x: Matrix) -> Unipotent:
    """exp of a strictly upper triangular matrix."""
    n = x.rows
    for i in range(n):
        for j in range(i + 1):
            if x[i, j] != 0:
                raise DomainError("u_exp expects a strictly upper triangular matrix")
    acc = Matrix.identity(n)
    term = Matrix.identity(n)
    fact = 1
    for k in range(1, n):
        term = term @ x
        fact *= k
        acc = acc + term.scale(Fraction(1, fact))
    return Unipotent(acc)


@dataclass(frozen=True)
class GeneratedGroup:
    generators: tuple[Unipotent, ...]
    n: int

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise DomainError("generator size mismatch")


# --- closure Lie algebra ------------------------------------------------------


def _upper_coords(m: Matrix) -> list:
    n = m.rows
    return [m[i, j] for i in range(n) for j in range(i + 1, n)]


def _split(vec: Sequence, p: int | None) -> tuple:
    """Rational coordinates (a_1, b_1, a_2, b_2, ...) of a Q(sqrt(p)) vector."""
    out = []
    for x in vec:
        if isinstance(x, QuadExt):
            out.extend((x.a, x.b))
        else:
            out.extend((Fraction(x), Fraction(0)))
    return tuple(out)


def _unsplit(vec: Sequence, p: int | None, n: int) -> Matrix:
    entries = [[Fraction(0)] * n for _ in range(n)]
    it = iter(range(0, len(vec), 2))
    for i in range(n):
        for j in range(i + 1, n):
            t = next(it)
            a, b = vec[t], vec[t + 1]
            entries[i][j] = QuadExt(a, b, p) if (p is not None and b != 0) else a
    return Matrix(entries, n)


@dataclass(frozen=True)
class ClosureAlgebra:
    """Bracket-closed Q-span of generator logs, split into rational coordinates."""

    n: int
    p: int | None
    basis: tuple[tuple, ...]       # rational vectors (split coordinates)
    matrices: tuple[Matrix, ...]   # the same basis as strictly upper triangular matrices
    real_dim: int

    @property
    def rational_dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def dense(self) -> bool:
        return self.real_dim == self.ambient_dim


def closure_lie_algebra(group: GeneratedGroup) -> ClosureAlgebra:
    """Smallest bracket-closed Q-subspace containing the logs of the generators.

    The real dimension is the rank over Q(sqrt(p)) of the basis matrices read
    as vectors, which equals the dimension of their real span.
    """
    n = group.n
    logs = [u_log(g) for g in group.generators]
    p = None
    for m in logs:
        for x in _upper_coords(m):
            if isinstance(x, QuadExt) and x.b != 0:
                if p is not None and p != x.p:
                    raise DomainError("generators mix quadratic fields")
                p = x.p
    width = n * (n - 1)
    basis = row_space_basis([_split(_upper_coords(m), p) for m in logs], width)
    while True:
        mats = [_unsplit(v, p, n) for v in basis]
        new = [_split(_upper_coords(a @ b - b @ a), p) for i, a in enumerate(mats) for b in mats[i + 1:]]
        grown = row_space_basis(basis + new, width)
        if len(grown) == len(basis):
            break
        basis = grown
    mats = [_unsplit(v, p, n) for v in basis]
    real_dim = len(row_space_basis([_upper_coords(m) for m in mats], n * (n - 1) // 2)) if mats else 0
    return ClosureAlgebra(n, p, tuple(basis), tuple(mats), real_dim)


# --- Heisenberg points and the lattice family ---------------------------------


@dataclass(frozen=True)
class HeisenbergPoint:
    x: QuadExt
    y: QuadExt
    z: QuadExt

    @classmethod
    def of(cls, x, y, z, p: int) -> HeisenbergPoint:
        return cls(_q(x, p), _q(y, p), _q(z, p))

    @property
    def p(self) -> int:
        return self.x.p

    def __post_init__(self):
        if not (self.x.p == self.y.p == self.z.p):
            raise DomainError("coordinates must share one quadratic field")

    def __mul__(self, other: HeisenbergPoint) -> HeisenbergPoint:
        return HeisenbergPoint(self.x + other.x, self.y + other.y, self.z + other.z + self.x * other.y)

    def inverse(self) -> HeisenbergPoint:
        return HeisenbergPoint(-self.x, -self.y, -self.z + self.x * self.y)

    def __pow__(self, m: int) -> HeisenbergPoint:
        # (x, y, z)^m = (m x, m y, m z + m(m-1)/2 x y), valid for all integers m
        return HeisenbergPoint(self.x * m, self.y * m, self.z * m + self.x * self.y * Fraction(m * (m - 1), 2))

    @classmethod
    def identity(cls, p: int) -> HeisenbergPoint:
        return cls.of(0, 0, 0, p)

    def to_unipotent(self) -> Unipotent:
        o, z = QuadExt(1, 0, self.p), QuadExt(0, 0, self.p)
        return Unipotent(Matrix([[o, self.x, self.z], [z, o, self.y], [z, z, o]]))

    @classmethod
    def from_unipotent(cls, u: Unipotent, p: int) -> HeisenbergPoint:
        m = u.matrix
        if u.n != 3:
            raise DomainError("expected a 3x3 unipotent matrix")
        return cls.of(m[0, 1], m[1, 2], m[0, 2], p)

    def log_coords(self) -> tuple[QuadExt, QuadExt, QuadExt]:
        """Coordinates of the log in the basis X = E12, Y = E23, Z = E13."""
        return self.x, self.y, self.z - self.x * self.y / 2


@dataclass(frozen=True)
class Membership:
    member: bool
    exponents: tuple[int, ...] | None = None  # (m1, m2, m3, m4, c1, c2)
    reason: str = ""


@dataclass(frozen=True)
class HeisenbergLattice:
    """Gamma(p, k) with generators A1..A4 and central elements C1, C2."""

    p: int
    k: int

    def __post_init__(self):
        if self.p < 2 or not is_squarefree(self.p):
            raise DomainError(f"p = {self.p} must be a squarefree integer > 1")
        if self.k < 1:
            raise LatticeError(f"k = {self.k} must be a positive integer")

    @property
    def root(self) -> QuadExt:
        """k sqrt(p)."""
        return QuadExt(0, self.k, self.p)

    def generators(self) -> tuple[HeisenbergPoint, ...]:
        r = self.root
        return (HeisenbergPoint.of(1, 0, 0, self.p), HeisenbergPoint.of(0, 1, 0, self.p),
                HeisenbergPoint.of(r, 0, 0, self.p), HeisenbergPoint.of(0, r, 0, self.p))

    def central(self) -> tuple[HeisenbergPoint, HeisenbergPoint]:
        return HeisenbergPoint.of(0, 0, 1, self.p), HeisenbergPoint.of(0, 0, self.root, self.p)

    def group(self) -> GeneratedGroup:
        return GeneratedGroup(tuple(g.to_unipotent() for g in self.generators()), 3)

    def split(self, v) -> tuple[int, int] | None:
        """(v1, v2) with v = v1 + v2 k sqrt(p), or None if v is not in R_k."""
        if isinstance(v, QuadExt) and v.b != 0 and v.p != self.p:
            return None
        v = _q(v, self.p)
        if v.a.denominator != 1:
            return None
        b = v.b / self.k
        if b.denominator != 1:
            return None
        return int(v.a), int(b)

    def normal_form(self, exps: Sequence[int]) -> HeisenbergPoint:
        """A1^m1 A3^m2 A2^m3 A4^m4 C1^c1 C2^c2."""
        a1, a2, a3, a4 = self.generators()
        c1, c2 = self.central()
        out = HeisenbergPoint.identity(self.p)
        for g, m in zip((a1, a3, a2, a4, c1, c2), exps):
            out = out * g ** m
        return out

    def membership(self, g: HeisenbergPoint) -> Membership:
        if g.p != self.p:
            if any(c.b != 0 for c in (g.x, g.y, g.z)):
                return Membership(False, reason=f"coordinates lie in Q(sqrt({g.p})), not Q(sqrt({self.p}))")
            g = HeisenbergPoint.of(g.x.a, g.y.a, g.z.a, self.p)
        sx, sy = self.split(g.x), self.split(g.y)
        if sx is None:
            return Membership(False, reason=f"x = {g.x} is not in Z + {self.k}Z sqrt({self.p})")
        if sy is None:
            return Membership(False, reason=f"y = {g.y} is not in Z + {self.k}Z sqrt({self.p})")
        # A1^m1 A3^m2 A2^m3 A4^m4 = (x, y, x y); the rest is central
        sw = self.split(g.z - g.x * g.y)
        if sw is None:
            return Membership(False, reason=f"central part {g.z - g.x * g.y} is not in Z + {self.k}Z sqrt({self.p})")
        exps = (sx[0], sx[1], sy[0], sy[1], sw[0], sw[1])
        assert self.normal_form(exps) == g
        return Membership(True, exps)


# --- quadratic coordinate maps ------------------------------------------------


class _Poly:
    """Sparse multivariate polynomial with exponent-tuple keys."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: dict, nvars: int):
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self.nvars = nvars

    @classmethod
    def var(cls, i: int, nvars: int) -> _Poly:
        return cls({tuple(int(j == i) for j in range(nvars)): Fraction(1)}, nvars)

    @classmethod
    def const(cls, c, nvars: int) -> _Poly:
        return cls({(0,) * nvars: c}, nvars)

    def __add__(self, other):
        if not isinstance(other, _Poly):
            other = _Poly.const(other, self.nvars)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return _Poly(t, self.nvars)

    __radd__ = __add__

    def __mul__(self, other):
        if not isinstance(other, _Poly):
            return _Poly({m: c * other for m, c in self.terms.items()}, self.nvars)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return _Poly(t, self.nvars)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class Violation:
    coordinate: str
    monomial: str
    lhs: str
    rhs: str

    def __str__(self):
        return f"{self.coordinate}-coefficient of {self.monomial}: f(gh) gives {self.lhs}, f(g)f(h) gives {self.rhs}"


_VARS = ("x", "y", "z", "x'", "y'", "z'")


def _monomial_str(m: tuple[int, ...]) -> str:
    parts = [v if e == 1 else f"{v}^{e}" for v, e in zip(_VARS, m) if e]
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class HeisenbergMap:
    """f(x, y, z) = (a x + b y, c x + d y, s z + qxx x^2 + qxy x y + qyy y^2)."""

    a: QuadExt
    b: QuadExt
    c: QuadExt
    d: QuadExt
    s: QuadExt
    qxx: QuadExt
    qxy: QuadExt
    qyy: QuadExt

    @classmethod
    def linear(cls, a, b, c, d, s, p: int, qxx=0, qxy=0, qyy=0) -> HeisenbergMap:
        return cls(*(_q(v, p) for v in (a, b, c, d, s, qxx, qxy, qyy)))

    @classmethod
    def identity(cls, p: int) -> HeisenbergMap:
        return cls.linear(1, 0, 0, 1, 1, p)

    @classmethod
    def from_unit(cls, alpha: QuadExt, m: Sequence[Sequence[int]], variant: str = "halved") -> HeisenbergMap:
        """The family built from a unit alpha and M' in SL(2, Z).

        (a, b; c, d) = alpha M'. The "printed" variant uses quadratic terms
        a c x^2 + b d y^2 + b c x y; the "halved" variant uses a c / 2 and b d / 2.
        """
        p = alpha.p
        a, b = alpha * m[0][0], alpha * m[0][1]
        c, d = alpha * m[1][0], alpha * m[1][1]
        if variant == "printed":
            qxx, qyy = a * c, b * d
        elif variant == "halved":
            qxx, qyy = a * c / 2, b * d / 2
        else:
            raise DomainError(f"unknown variant {variant!r} (expected 'printed' or 'halved')")
        return cls.linear(a, b, c, d, alpha * alpha, p, qxx, b * c, qyy)

    @property
    def p(self) -> int:
        return self.a.p

    def __call__(self, g: HeisenbergPoint) -> HeisenbergPoint:
        x, y, z = g.x, g.y, g.z
        return HeisenbergPoint(self.a * x + self.b * y, self.c * x + self.d * y,
                               self.s * z + self.qxx * x * x + self.qxy * x * y + self.qyy * y * y)

    def linear_part(self) -> Matrix:
        """Differential at the identity on (X, Y, Z) column coordinates."""
        o = QuadExt(0, 0, self.p)
        return Matrix([[self.a, self.b, o], [self.c, self.d, o], [o, o, self.s]])

    def jacobian_det(self):
        return self.linear_part().det()

    def inverse(self) -> HeisenbergMap:
        det = self.a * self.d - self.b * self.c
        if det == 0 or self.s == 0:
            raise DomainError("coordinate map is not invertible")
        # (x, y) = L^-1 (X, Y); z = (Z - Q(x, y)) / s
        ia, ib = self.d / det, -self.b / det
        ic, id_ = -self.c / det, self.a / det
        qxx = (self.qxx * ia * ia + self.qxy * ia * ic + self.qyy * ic * ic)
        qyy = (self.qxx * ib * ib + self.qxy * ib * id_ + self.qyy * id_ * id_)
        qxy = (2 * self.qxx * ia * ib + self.qxy * (ia * id_ + ib * ic) + 2 * self.qyy * ic * id_)
        return HeisenbergMap(ia, ib, ic, id_, 1 / self.s, -qxx / self.s, -qxy / self.s, -qyy / self.s)

    def _symbolic(self, x, y, z):
        return (x * self.a + y * self.b, x * self.c + y * self.d,
                z * self.s + x * x * self.qxx + x * y * self.qxy + y * y * self.qyy)


def _symbolic_product(g, h):
    x, y, z = g
    x2, y2, z2 = h
    return x + x2, y + y2, z + z2 + x * y2


def homomorphism_check(f: HeisenbergMap) -> Violation | None:
    """Expand f(g h) and f(g) f(h) with indeterminate coordinates; first mismatch or None."""
    v = [_Poly.var(i, 6) for i in range(6)]
    g, h = (v[0], v[1], v[2]), (v[3], v[4], v[5])
    lhs = f._symbolic(*_symbolic_product(g, h))
    rhs = _symbolic_product(f._symbolic(*g), f._symbolic(*h))
    for name, l, r in zip("xyz", lhs, rhs):
        keys = sorted(set(l.terms) | set(r.terms), reverse=True)
        for m in keys:
            cl, cr = l.terms.get(m, 0), r.terms.get(m, 0)
            if cl != cr:
                return Violation(name, _monomial_str(m), str(cl), str(cr))
    return None


@dataclass(frozen=True)
class LatticeCheck:
    preserved: bool
    forward: tuple[Membership, ...]
    backward: tuple[Membership, ...]

    def first_failure(self) -> str | None:
        for tag, ms in (("f", self.forward), ("f^-1", self.backward)):
            for i, m in enumerate(ms):
                if not m.member:
                    return f"{tag}(A{i + 1}) not in lattice: {m.reason}"
        return None


def preserves_lattice(f: HeisenbergMap, lattice: HeisenbergLattice) -> LatticeCheck:
    """f(A_i) and f^-1(A_i) in the lattice for every generator."""
    inv = f.inverse()
    gens = lattice.generators()
    fwd = tuple(lattice.membership(f(g)) for g in gens)
    bwd = tuple(lattice.membership(inv(g)) for g in gens)
    ok = all(m.member for m in fwd + bwd)
    return LatticeCheck(ok, fwd, bwd)


# --- parameter validation -----------------------------------------------------


@dataclass(frozen=True)
class UnitParameters:
    p: int
    alpha: QuadExt
    m: tuple[tuple[int, int], tuple[int, int]]
    k: int

    @property
    def beta(self) -> QuadExt:
        return self.alpha.inverse()


def validate_parameters(p: int, alpha_a: int, alpha_b: int, m: Sequence[Sequence[int]]) -> UnitParameters:
    """Checks alpha = a + b sqrt(p) is a unit of Z[sqrt(p)] and det M' = 1; computes k."""
    if p < 2 or not is_squarefree(p):
        raise DomainError(f"p = {p} must be a squarefree integer > 1")
    alpha = QuadExt(alpha_a, alpha_b, p)
    norm = alpha.norm()
    if norm not in (1, -1):
        raise NotAUnit(f"alpha = {alpha} is not a unit of Z[sqrt({p})] (norm {norm})")
    mm = tuple(tuple(int(v) for v in row) for row in m)
    if len(mm) != 2 or any(len(r) != 2 for r in mm):
        raise DomainError("M' must be a 2x2 integer matrix")
    if mm[0][0] * mm[1][1] - mm[0][1] * mm[1][0] != 1:
        raise DomainError("M' must have determinant 1")
    beta = alpha.inverse()
    k = gcd(int(alpha.b), int(beta.b))
    if k == 0:
        raise LatticeError(f"k = gcd({alpha.b}, {beta.b}) = 0; alpha = {alpha} is rational and the family degenerates")
    return UnitParameters(p, alpha, mm, k)

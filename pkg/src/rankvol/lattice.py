"""Exact integer linear algebra on row lattices.

Vectors are tuples of Python ints and matrices are tuples of row vectors;
arbitrary-precision ints make every operation exact, with no overflow
anywhere.  Rationals, where they appear, are `fractions.Fraction`.

A :class:`Sublattice` is the set of integer combinations of its generator
rows inside Z^ambient_dim.  Its canonical basis is the row Hermite normal
form of the generators, so two sublattices are equal exactly when their
bases are equal as tuples.  All values here are immutable after
construction; sharing across tasks is safe.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from . import _rational

Vec = tuple[int, ...]
Mat = tuple[Vec, ...]


class DimensionMismatch(ValueError):
    """A vector's length does not match the ambient dimension."""


class NotASublattice(ValueError):
    """The alleged sublattice has a generator outside the ambient lattice."""


class InfiniteIndex(ValueError):
    """Coset representatives requested for a subgroup of infinite index."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    # Maintain the invariants:
    #          x * a +      y * b ==      g
    #     next_x * a + next_y * b == next_g
    # Run the Euclidean algorithm on (g, next_g) and carry the rest of the
    # equations along for the ride.
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def vadd(u, v) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v) -> Vec:
    return tuple(c * a for a in v)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def mat(rows) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def vec_mat(v, m: Mat):
    cols = list(zip(*m))
    return tuple(sum(x * c for x, c in zip(v, col)) for col in cols)


def det(m: Mat) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hermite_normal_form(m) -> tuple[Mat, Mat]:
    """Row Hermite normal form with its transformation matrix.

    Returns (h, u) with u unimodular and h = u . m in echelon form: pivots
    positive, entries above each pivot reduced into [0, pivot), zero rows
    at the bottom.
    """
    rows = [list(r) for r in m]
    nr = len(rows)
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    nc = len(rows[0]) if nr else 0
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, nr):
            if rows[i][c]:
                g, x, y = xgcd(rows[r][c], rows[i][c])
                ag, bg = rows[r][c] // g, rows[i][c] // g
                rows[r], rows[i] = (
                    [x * p + y * q for p, q in zip(rows[r], rows[i])],
                    [-bg * p + ag * q for p, q in zip(rows[r], rows[i])],
                )
                u[r], u[i] = (
                    [x * p + y * q for p, q in zip(u[r], u[i])],
                    [-bg * p + ag * q for p, q in zip(u[r], u[i])],
                )
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [p - q * s for p, s in zip(rows[i], rows[r])]
                u[i] = [p - q * s for p, s in zip(u[i], u[r])]
        r += 1
    return mat(rows), mat(u)


def smith_normal_form(m) -> tuple[Mat, Mat, Mat]:
    """Smith normal form s = u . m . v with u, v unimodular.

    The diagonal of s is nonnegative and satisfies s1 | s2 | ... .
    """
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    v = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def row_combine(i1, i2, c):
        g, x, y = xgcd(a[i1][c], a[i2][c])
        ag, bg = a[i1][c] // g, a[i2][c] // g
        a[i1], a[i2] = (
            [x * p + y * q for p, q in zip(a[i1], a[i2])],
            [-bg * p + ag * q for p, q in zip(a[i1], a[i2])],
        )
        u[i1], u[i2] = (
            [x * p + y * q for p, q in zip(u[i1], u[i2])],
            [-bg * p + ag * q for p, q in zip(u[i1], u[i2])],
        )

    def col_combine(j1, j2, r):
        g, x, y = xgcd(a[r][j1], a[r][j2])
        ag, bg = a[r][j1] // g, a[r][j2] // g
        for row in a:
            row[j1], row[j2] = x * row[j1] + y * row[j2], -bg * row[j1] + ag * row[j2]
        for row in v:
            row[j1], row[j2] = x * row[j1] + y * row[j2], -bg * row[j1] + ag * row[j2]

    def clear_at(t):
        while True:
            piv = next(((i, j) for i in range(t, nr) for j in range(t, nc)
                        if a[i][j]), None)
            if piv is None:
                return False
            i, j = piv
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            for row in v:
                row[t], row[j] = row[j], row[t]
            while True:
                for i in range(t + 1, nr):
                    if a[i][t]:
                        row_combine(t, i, t)
                if any(a[t][j] for j in range(t + 1, nc)):
                    for j in range(t + 1, nc):
                        if a[t][j]:
                            col_combine(t, j, t)
                else:
                    break
                if not any(a[i][t] for i in range(t + 1, nr)):
                    break
            return True

    t = 0
    while t < min(nr, nc) and clear_at(t):
        t += 1

    # Enforce the divisibility chain; each fix re-clears the touched block.
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            d1, d2 = a[i][i], a[i + 1][i + 1]
            if d2 % d1:
                for row in a:
                    row[i] += row[i + 1]
                for row in v:
                    row[i] += row[i + 1]
                k = i
                while k < t and clear_at(k):
                    k += 1
                changed = True
                break
    for i in range(t):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            u[i] = [-x for x in u[i]]
    return mat(a), mat(u), mat(v)


def unimodular_inverse(m: Mat) -> Mat:
    h, w = hermite_normal_form(m)
    if h != identity(len(m)):
        raise ValueError("matrix is not unimodular")
    return w


def kernel_basis(rows, dim: int) -> Mat:
    """Basis of the integer kernel {x in Z^dim : row . x = 0 for all rows}.

    The kernel of an integer matrix is a saturated sublattice, so this
    basis is primitive.  Computed from the HNF transformation of the
    transpose: rows of u matching zero rows of h annihilate every input.
    """
    rows = mat(rows)
    if not rows:
        return identity(dim)
    t = tuple(tuple(row[i] for row in rows) for i in range(dim))
    h, u = hermite_normal_form(t)
    return tuple(u[i] for i in range(dim) if not any(h[i]))


class Sublattice:
    """Integer sublattice of Z^ambient_dim spanned by generator rows.

    The basis is the nonzero-row part of the generators' Hermite normal
    form, computed eagerly; instances are immutable and hashable.
    """

    __slots__ = ("ambient_dim", "generators", "basis", "rank", "_pivots")

    def __init__(self, ambient_dim: int, generators) -> None:
        gens = mat(generators)
        for g in gens:
            if len(g) != ambient_dim:
                raise DimensionMismatch(
                    f"generator of length {len(g)} in Z^{ambient_dim}")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "generators", gens)
        h, _ = hermite_normal_form(gens)
        basis = tuple(row for row in h if any(row))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "rank", len(basis))
        pivots = tuple(next(j for j, x in enumerate(row) if x) for row in basis)
        object.__setattr__(self, "_pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Sublattice is immutable")

    @classmethod
    def span(cls, ambient_dim: int, generators) -> "Sublattice":
        return cls(ambient_dim, generators)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Sublattice":
        return cls(ambient_dim, ())

    @classmethod
    def standard(cls, ambient_dim: int) -> "Sublattice":
        return cls(ambient_dim, identity(ambient_dim))

    def coordinates(self, v) -> Vec | None:
        """Integer coordinates of v in the basis, or None if v is outside."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(
                f"vector of length {len(v)} in Z^{self.ambient_dim}")
        rem = list(v)
        coords = []
        for row, p in zip(self.basis, self._pivots):
            q, r = divmod(rem[p], row[p])
            if r:
                return None
            if q:
                rem = [x - q * y for x, y in zip(rem, row)]
            coords.append(q)
        if any(rem):
            return None
        return tuple(coords)

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Sublattice)
                and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Sublattice(Z^{self.ambient_dim}, basis={list(self.basis)})"


class CosetSet:
    """Representatives for the cosets of `sublattice` inside `ambient`."""

    __slots__ = ("sublattice", "ambient", "representatives")

    def __init__(self, sublattice: Sublattice, ambient: Sublattice,
                 representatives) -> None:
        object.__setattr__(self, "sublattice", sublattice)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "representatives", mat(representatives))

    def __setattr__(self, name, value):
        raise AttributeError("CosetSet is immutable")

    def __len__(self) -> int:
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)

    def __repr__(self) -> str:
        return f"CosetSet({len(self)} representatives)"


def member(v, lattice: Sublattice) -> bool:
    """True iff v is an integer combination of the lattice's generators."""
    return lattice.coordinates(v) is not None


def saturate(lattice: Sublattice) -> Sublattice:
    """Saturation Z^d intersect Q.L: same rational span, torsion-free quotient.

    Computed as the integer kernel of the kernel of the basis; kernels are
    saturated by construction, so no division step is needed.
    """
    d = lattice.ambient_dim
    if lattice.rank == 0:
        return Sublattice.zero(d)
    perp = kernel_basis(lattice.basis, d)
    if not perp:
        return Sublattice.standard(d)
    return Sublattice(d, kernel_basis(perp, d))


def _coords_in(sup: Sublattice, rows) -> Mat:
    out = []
    for r in rows:
        c = sup.coordinates(r)
        if c is None:
            raise NotASublattice(f"{r} is not in the ambient lattice")
        out.append(c)
    return mat(out)


def lattice_index(sub: Sublattice, sup: Sublattice):
    """Group index [sup : sub]; math.inf when the ranks differ."""
    if sub.ambient_dim != sup.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    _coords_in(sup, sub.generators)
    if sub.rank < sup.rank:
        return math.inf
    c = _coords_in(sup, sub.basis)
    return abs(det(c))


def coset_representatives(sub: Sublattice, sup: Sublattice) -> CosetSet:
    """Canonical coset representatives of sub in sup (finite index only).

    Representatives are computed from the Smith normal form of the
    inclusion matrix and then reduced into the half-open fundamental
    parallelepiped of sub's basis, expressed in sup's coordinates, which
    makes the output deterministic.
    """
    if sub.ambient_dim != sup.ambient_dim:
        raise DimensionMismatch("ambient dimensions differ")
    _coords_in(sup, sub.generators)
    if sub.rank < sup.rank:
        raise InfiniteIndex("sublattice has infinite index")
    r = sup.rank
    if r == 0:
        zero = (0,) * sub.ambient_dim
        return CosetSet(sub, sup, (zero,))
    c = _coords_in(sup, sub.basis)
    s, _, v = smith_normal_form(c)
    w = unimodular_inverse(v)
    factors = [s[i][i] for i in range(r)]
    c_inv = _rational.invert(c)
    reps = []
    for combo in product(*(range(f) for f in factors)):
        rep = tuple(sum(combo[i] * w[i][j] for i in range(r)) for j in range(r))
        lam = tuple(sum(Fraction(rep[i]) * c_inv[i][j] for i in range(r))
                    for j in range(r))
        rep = tuple(x - sum(math.floor(lam[i]) * c[i][j] for i in range(r))
                    for j, x in enumerate(rep))
        reps.append(vec_mat(rep, sup.basis))
    reps.sort()
    return CosetSet(sub, sup, reps)

"""Membership, holes and normality for the affine semigroup of a configuration.

NA is the set of nonnegative integer combinations of the columns.
Membership is decided by a memoized search that strips one generator at a
time: the positivity certificate h satisfies h(a_j) > 0, so h(v) strictly
decreases toward zero and the recursion terminates; states outside the
cone are rejected immediately by the facet inequalities.

`contains_mod_face` answers membership in NA + ZF by projecting onto the
quotient Z^d / ZF and running the same search there; the free part of the
quotient comes from a Smith normal form of ZF's basis and the finite
torsion components are tracked exactly, so non-saturated face lattices are
handled correctly.

A MembershipIndex (or QuotientSemigroup) owns a mutable memo table and
should be confined to one logical task; every other function here is pure.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

from .lattice import (
    Sublattice,
    Vec,
    dot,
    mat,
    smith_normal_form,
    unimodular_inverse,
    vec_mat,
    vsub,
)
from . import _rational
from .polytope import Configuration, Face, cone_facets, hull


class NotAFace(ValueError):
    """The given face lacks a valid supporting certificate."""


class MembershipIndex:
    """Memoized membership table for NA, shared across queries.

    The table maps integer vectors to booleans and is filled by the
    defining recursion: v is in NA iff v = 0 or v - a_j is in NA for some
    column; h(v - a_j) < h(v) bounds the depth.
    """

    def __init__(self, config: Configuration) -> None:
        self.config = config
        self.functional = config.positivity_functional
        self.table: dict[Vec, bool] = {(0,) * config.d: True}
        self._facets = cone_facets(config)
        self._gens = config.columns

    def contains(self, v) -> bool:
        v = tuple(int(x) for x in v)
        table = self.table
        gens = self._gens
        facets = self._facets
        stack = [v]
        while stack:
            x = stack[-1]
            if x in table:
                stack.pop()
                continue
            if any(dot(phi, x) < 0 for phi in facets):
                table[x] = False
                stack.pop()
                continue
            nxt = None
            hit = False
            done = True
            for g in gens:
                kid = vsub(x, g)
                known = table.get(kid)
                if known:
                    hit = True
                    break
                if known is None:
                    if nxt is None:
                        nxt = kid
                    done = False
            if hit:
                table[x] = True
                stack.pop()
            elif done:
                table[x] = False
                stack.pop()
            else:
                stack.append(nxt)
        return table[v]


class QuotientSemigroup:
    """Image of NA + ZF in the quotient Z^d / ZF, with membership search.

    States are (free part, torsion part) pairs; the face columns map to
    zero and are dropped from the generators.  The face's supporting
    functional descends to the free part and certifies pointedness there.
    """

    def __init__(self, face: Face, config: Configuration) -> None:
        d = config.d
        cols = config.columns
        phi = face.normal
        onface = set(face.indices)
        if any(dot(phi, config.column(j)) != 0 for j in onface) or any(
                dot(phi, config.column(j)) <= 0
                for j in range(1, config.n + 1) if j not in onface):
            raise NotAFace(f"invalid certificate for {face!r}")
        self.face = face
        zf = Sublattice(d, [config.column(j) for j in face.indices])
        r = zf.rank
        self.free_rank = d - r
        if r:
            s, _, v = smith_normal_form(zf.basis)
            w = unimodular_inverse(v)
            self._v = v
            factors = [s[i][i] for i in range(r)]
        else:
            self._v = tuple(tuple(int(i == j) for j in range(d))
                            for i in range(d))
            w = self._v
            factors = []
        self._r = r
        self.torsion = tuple(f for f in factors if f > 1)
        self._tor_slots = tuple(i for i, f in enumerate(factors) if f > 1)
        self._factors = factors
        # Functional on the free part, induced by the face certificate.
        self.functional = tuple(dot(phi, w[i]) for i in range(r, d))
        gens = []
        for j in range(1, config.n + 1):
            if j in onface:
                continue
            gens.append(self._project(config.column(j)))
        self.projected_generators = tuple(sorted(set(gens)))
        self.table: dict[tuple, bool] = {}
        if self.free_rank:
            frees = sorted({g[0] for g in self.projected_generators})
            self._free_facets = _free_cone_facets(frees, self.free_rank)
        else:
            self._free_facets = ()
        zero = ((0,) * self.free_rank, (0,) * len(self.torsion))
        self.table[zero] = True

    def _project(self, vec) -> tuple[Vec, Vec]:
        c = vec_mat(vec, self._v)
        free = tuple(c[self._r:])
        tor = tuple(c[i] % self._factors[i] for i in self._tor_slots)
        return free, tor

    def contains(self, vec) -> bool:
        """True iff vec lies in NA + ZF."""
        if self.free_rank == 0:
            return True
        start = self._project(tuple(int(x) for x in vec))
        facets = self._free_facets

        def cone_test(state):
            return all(dot(phi, state[0]) >= 0 for phi in facets)

        gens = self.projected_generators
        table = self.table
        stack = [start]
        while stack:
            x = stack[-1]
            if x in table:
                stack.pop()
                continue
            if not cone_test(x):
                table[x] = False
                stack.pop()
                continue
            nxt = None
            hit = False
            done = True
            for gf, gt in gens:
                kid = (vsub(x[0], gf),
                       tuple((a - b) % f for a, b, f in
                             zip(x[1], gt, self.torsion)))
                known = table.get(kid)
                if known:
                    hit = True
                    break
                if known is None:
                    if nxt is None:
                        nxt = kid
                    done = False
            if hit:
                table[x] = True
                stack.pop()
            elif done:
                table[x] = False
                stack.pop()
            else:
                stack.append(nxt)
        return table[start]


def _free_cone_facets(frees, dim: int) -> tuple[Vec, ...]:
    """Facet normals of the projected cone, used only for pruning."""
    from .polytope import _facet_normals
    return _facet_normals(mat(frees), dim)


def contains(v, idx: MembershipIndex) -> bool:
    """True iff v is a nonnegative integer combination of the columns."""
    if len(v) != idx.config.d:
        raise ValueError(f"vector of length {len(v)} in Z^{idx.config.d}")
    return idx.contains(v)


def contains_mod_face(v, face: Face, config: Configuration) -> bool:
    """True iff v lies in NA + ZF for the face F."""
    return QuotientSemigroup(face, config).contains(v)


def hilbert_basis(config: Configuration) -> list[Vec]:
    """Minimal generating set of the saturated semigroup cone cap Z^d.

    The cone is triangulated through the placing triangulation of the
    polytope of the columns and the origin (the star of the origin gives
    simplicial subcones spanned by columns); the half-open fundamental
    parallelepiped of each subcone is enumerated by bounding-box filtering
    on rational coordinates, and the union with the columns is reduced to
    its irreducible elements.
    """
    d = config.d
    origin = (0,) * d
    h = hull([origin] + list(config.columns))
    zero_at = h.points.index(tuple(Fraction(0) for _ in range(d)))
    para_points: set[Vec] = set()
    for s in h.triangulation:
        if zero_at not in s:
            continue
        rays = [tuple(int(x) for x in h.points[t]) for t in s if t != zero_at]
        inv = _rational.invert(rays)
        corners = [tuple(sum(r[i] for r in sub) for i in range(d))
                   for m in range(len(rays) + 1)
                   for sub in combinations(rays, m)]
        lo = [min(c[i] for c in corners) for i in range(d)]
        hi = [max(c[i] for c in corners) for i in range(d)]
        for z in product(*(range(l, u + 1) for l, u in zip(lo, hi))):
            lam = [sum(z[i] * inv[i][j] for i in range(d)) for j in range(d)]
            if all(0 <= t < 1 for t in lam) and any(z):
                para_points.add(z)
    candidates = set(config.columns) | para_points
    facets = cone_facets(config)

    def in_cone(x):
        return all(dot(phi, x) >= 0 for phi in facets)

    basis = []
    for x in sorted(candidates):
        reducible = False
        for c in candidates:
            if c == x:
                continue
            rest = vsub(x, c)
            if any(rest) and in_cone(rest):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return basis


def is_normal(config: Configuration) -> bool:
    """True iff NA equals its saturation, i.e. the semigroup has no holes."""
    idx = MembershipIndex(config)
    return all(idx.contains(b) for b in hilbert_basis(config))


class HoleReport:
    """Holes of NA found inside an integer box."""

    __slots__ = ("box", "holes")

    def __init__(self, box, holes) -> None:
        object.__setattr__(self, "box", tuple(tuple(b) for b in box))
        object.__setattr__(self, "holes", tuple(holes))

    def __setattr__(self, name, value):
        raise AttributeError("HoleReport is immutable")

    def __repr__(self) -> str:
        return f"HoleReport(box={self.box}, {len(self.holes)} holes)"


def holes_in_box(config: Configuration, box) -> HoleReport:
    """Lattice points of the cone inside the box that are missing from NA.

    `box` is a sequence of d inclusive (lo, hi) integer bounds.
    """
    box = [(int(lo), int(hi)) for lo, hi in box]
    if len(box) != config.d:
        raise ValueError(f"box must have {config.d} coordinate ranges")
    facets = cone_facets(config)
    idx = MembershipIndex(config)
    holes = []
    for p in product(*(range(lo, hi + 1) for lo, hi in box)):
        if all(dot(phi, p) >= 0 for phi in facets) and not idx.contains(p):
            holes.append(p)
    return HoleReport(box, holes)

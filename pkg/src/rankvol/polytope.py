"""Exact rational convex geometry for pointed integer point configurations.

A :class:`Configuration` is an integer d x n matrix whose columns generate
the lattice Z^d and span a pointed full-dimensional cone; `validate`
checks all of that and attaches a strictly positive certificate
functional.  On top of it this module computes cone facets, the face
lattice, convex hulls with a placing triangulation, normalized lattice
volumes, and the point-augmentation procedure used by the volume
lower-bound argument.

Column indices are 1-based throughout the public API (columns are a_1 ..
a_n), matching the usual notation for these configurations.

Scale ceiling: face enumeration intersects facet supports and hulls are
built incrementally with exact rational arithmetic; both are meant for
desk-scale inputs (n up to ~12, d up to ~7), not for bulk polyhedral
computation.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product

from . import _rational
from .lattice import (
    Mat,
    Sublattice,
    Vec,
    det,
    dot,
    kernel_basis,
    lattice_index,
    mat,
    saturate,
    vsub,
)


class NotFullRank(ValueError):
    """The columns do not span R^d."""


class LatticeNotZd(ValueError):
    """The columns generate a proper sublattice of Z^d."""


class DuplicateOrZeroColumn(ValueError):
    """Columns must be pairwise distinct and nonzero."""


class NotPointed(ValueError):
    """The cone of the columns contains a line."""


class LambdaOutOfRange(ValueError):
    """Volume lattice violates F contained in L contained in Z^d cap QF."""


class PreconditionViolated(ValueError):
    """Augmentation called on a set that is not a fixed point of delta_cap."""


class Configuration:
    """Validated integer configuration with a positivity certificate."""

    __slots__ = ("d", "n", "columns", "positivity_functional")

    def __init__(self, d: int, n: int, columns: Mat,
                 positivity_functional: Vec) -> None:
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "positivity_functional", positivity_functional)

    def __setattr__(self, name, value):
        raise AttributeError("Configuration is immutable")

    def column(self, j: int) -> Vec:
        """Column a_j, 1-based."""
        return self.columns[j - 1]

    def __repr__(self) -> str:
        return f"Configuration(d={self.d}, n={self.n})"


class Face:
    """Face of a configuration: column subset plus a supporting certificate.

    `normal` vanishes on the face's columns and is strictly positive on all
    others; it is the zero vector for the full face and a strictly positive
    functional for the empty face (codim d by convention).
    """

    __slots__ = ("indices", "normal", "dim", "codim")

    def __init__(self, indices, normal: Vec, dim: int, codim: int) -> None:
        object.__setattr__(self, "indices", tuple(sorted(indices)))
        object.__setattr__(self, "normal", tuple(normal))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "codim", codim)

    def __setattr__(self, name, value):
        raise AttributeError("Face is immutable")

    def __eq__(self, other):
        return isinstance(other, Face) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self) -> str:
        return f"Face(indices={self.indices}, codim={self.codim})"


class PolytopeHull:
    """Exact hull of a rational point set with a placing triangulation.

    `points` are the deduplicated, lexicographically sorted input points;
    `triangulation` contains index tuples into `points` (simplices of the
    hull's affine dimension, with pairwise disjoint interiors whose union
    is the hull).  `facet_inequalities` are pairs (normal, offset) of
    primitive integer data meaning normal . x <= offset; for hulls of
    affine dimension below d they include the span equations as opposite
    inequality pairs, so a point lies in the hull iff it satisfies every
    inequality.  `vertices` are the extreme points.
    """

    __slots__ = ("points", "vertices", "facet_inequalities", "dim",
                 "triangulation")

    def __init__(self, points, vertices, facet_inequalities, dim,
                 triangulation) -> None:
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "facet_inequalities",
                           tuple(facet_inequalities))
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "triangulation", tuple(triangulation))

    def __setattr__(self, name, value):
        raise AttributeError("PolytopeHull is immutable")

    def contains(self, point) -> bool:
        p = tuple(Fraction(x) for x in point)
        return all(dot(normal, p) <= offset
                   for normal, offset in self.facet_inequalities)

    def __repr__(self) -> str:
        return (f"PolytopeHull(dim={self.dim}, {len(self.vertices)} vertices,"
                f" {len(self.triangulation)} simplices)")


def _int_rank(rows) -> int:
    if not rows:
        return 0
    return Sublattice(len(rows[0]), rows).rank


def _primitive(v) -> Vec:
    """Scale a rational vector to a primitive integer vector (same ray)."""
    denom = math.lcm(*(Fraction(x).denominator for x in v)) if v else 1
    w = [int(Fraction(x) * denom) for x in v]
    g = math.gcd(*w) if any(w) else 1
    return tuple(x // (g or 1) for x in w)


def _int_ineq(phi, offset) -> tuple[Vec, int]:
    """Scale an inequality phi . x <= offset to primitive integer data."""
    phi = [Fraction(x) for x in phi]
    offset = Fraction(offset)
    denom = math.lcm(*(x.denominator for x in phi), offset.denominator)
    w = [int(x * denom) for x in phi]
    c = int(offset * denom)
    g = math.gcd(*w, c)
    if g > 1:
        w = [x // g for x in w]
        c //= g
    return tuple(w), c


def _facet_normals(columns: Mat, d: int) -> tuple[Vec, ...]:
    """Primitive inner normals of the facets of cone(columns).

    Every facet of the cone contains d-1 linearly independent generators,
    so candidate hyperplanes come from rank-(d-1) column subsets; a
    candidate survives when all columns lie weakly on one side.
    """
    normals = set()
    n = len(columns)
    for combo in combinations(range(n), d - 1):
        rows = [columns[j] for j in combo]
        kern = kernel_basis(rows, d)
        if len(kern) != 1:
            continue
        phi = kern[0]
        values = [dot(phi, a) for a in columns]
        if any(x > 0 for x in values) and any(x < 0 for x in values):
            continue
        if any(x < 0 for x in values):
            phi = tuple(-x for x in phi)
        normals.add(phi)
    return tuple(sorted(normals))


def validate(columns) -> Configuration:
    """Check the standing hypotheses and build a Configuration.

    Raises DuplicateOrZeroColumn, NotFullRank, LatticeNotZd or NotPointed,
    naming the violated hypothesis.  The positivity certificate is the sum
    of the primitive facet normals, validated by evaluation: in a pointed
    cone no nonzero generator lies on every facet.
    """
    cols = mat(columns)
    if not cols:
        raise NotFullRank("empty configuration")
    d = len(cols[0])
    for c in cols:
        if len(c) != d:
            raise NotFullRank("columns of unequal dimension")
    if len(set(cols)) != len(cols) or any(not any(c) for c in cols):
        raise DuplicateOrZeroColumn("columns must be distinct and nonzero")
    lat = Sublattice(d, cols)
    if lat.rank != d:
        raise NotFullRank(f"columns span a rank-{lat.rank} subspace of R^{d}")
    if lat.basis != tuple(tuple(int(i == j) for j in range(d))
                          for i in range(d)):
        raise LatticeNotZd("columns generate a proper sublattice of Z^d")
    facets = _facet_normals(cols, d)
    h = tuple(sum(phi[i] for phi in facets) for i in range(d))
    if any(dot(h, a) <= 0 for a in cols):
        raise NotPointed("semigroup is not positive")
    return Configuration(d, len(cols), cols, h)


def cone_facets(config: Configuration) -> tuple[Vec, ...]:
    """Primitive facet normals of the cone of the configuration."""
    return _facet_normals(config.columns, config.d)


def faces(config: Configuration) -> list[Face]:
    """All faces of the configuration, including the full and empty face.

    Faces are exactly the intersections of facet contact sets, closed
    under pairwise intersection; every column in the rational span of a
    face already lies in the face, so no extra pruning is needed.  Each
    face's certificate is the sum of the normals of the facets containing
    it.
    """
    d, cols = config.d, config.columns
    facet_normals = cone_facets(config)
    contacts = [frozenset(j for j, a in enumerate(cols) if dot(phi, a) == 0)
                for phi in facet_normals]
    full = frozenset(range(config.n))
    found = {full} | set(contacts)
    frontier = list(found)
    while frontier:
        nxt = []
        for s in frontier:
            for c in contacts:
                t = s & c
                if t not in found:
                    found.add(t)
                    nxt.append(t)
        frontier = nxt
    out = []
    for s in found:
        normal = [0] * d
        for phi, c in zip(facet_normals, contacts):
            if s <= c:
                normal = [x + y for x, y in zip(normal, phi)]
        sub = [cols[j] for j in s]
        fdim = _int_rank(sub)
        out.append(Face((j + 1 for j in s), tuple(normal), fdim,
                        d - fdim if s else d))
    out.sort(key=lambda f: (f.dim, f.indices))
    return out


def _frac_point(p):
    return tuple(Fraction(x) for x in p)


class _AffineFrame:
    """Affine coordinates on the span of a point set, exact over Q."""

    def __init__(self, points):
        self.p0 = points[0]
        dirs = []
        for p in points[1:]:
            v = vsub(p, self.p0)
            if _rational.rank(dirs + [list(v)]) > len(dirs):
                dirs.append(list(v))
        self.dirs = dirs
        self.k = len(dirs)
        if self.k:
            self.pivots = self._pivot_columns(dirs)
            sq = [[dirs[i][c] for c in self.pivots] for i in range(self.k)]
            self.inv = _rational.invert(sq)
        else:
            self.pivots = []
            self.inv = ()

    @staticmethod
    def _pivot_columns(dirs):
        a = [[Fraction(x) for x in row] for row in dirs]
        nr, nc = len(a), len(a[0])
        pivots = []
        r = 0
        for c in range(nc):
            piv = next((i for i in range(r, nr) if a[i][c]), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            for i in range(nr):
                if i != r and a[i][c]:
                    f = a[i][c] / a[r][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return pivots

    def coords(self, p):
        """Coordinates c with p = p0 + sum c_i * dirs_i (p must be in span)."""
        diff = vsub(p, self.p0)
        sel = [diff[c] for c in self.pivots]
        return tuple(sum(Fraction(sel[i]) * self.inv[i][j]
                         for i in range(self.k)) for j in range(self.k))

    def ambient_normal(self, local_normal):
        """Pull a local functional back to an ambient normal vector.

        Returns phi with phi . (x - p0) = local_normal . coords(x) for all
        x in the span.
        """
        d = len(self.p0)
        phi = [Fraction(0)] * d
        for i, c in enumerate(self.pivots):
            val = sum(Fraction(local_normal[j]) * self.inv[i][j]
                      for j in range(self.k))
            phi[c] = val
        return tuple(phi)


def _simplex_boundary(simplices):
    """Boundary facets of a simplicial complex with their owning apex."""
    seen = {}
    for s in simplices:
        for drop in range(len(s)):
            g = s[:drop] + s[drop + 1:]
            seen.setdefault(g, []).append(s[drop])
    return [(g, owners[0]) for g, owners in sorted(seen.items())
            if len(owners) == 1]


def _hyperplane_through(points_local, k):
    """Normal of the hyperplane through k affinely independent points in Q^k."""
    base = points_local[0]
    rows = [list(vsub(p, base)) for p in points_local[1:]]
    kern = _rational.kernel(rows, k)
    normal = kern[0]
    return normal, dot(normal, base)


def hull(points) -> PolytopeHull:
    """Exact convex hull with a beneath-beyond placing triangulation.

    Points are deduplicated and sorted lexicographically, then placed in
    order: a point beyond some boundary facets is coned onto the visible
    ones, a point raising the affine dimension is coned onto the whole
    complex, and a point inside the current hull is skipped.  The result
    is deterministic for a given input set.
    """
    if not points:
        raise ValueError("hull of an empty point set")
    pts = sorted({_frac_point(p) for p in points})
    d = len(pts[0])
    frame = _AffineFrame(pts)
    k = frame.k
    local = [frame.coords(p) for p in pts]

    simplices = [(0,)]
    span_members = [0]
    placed_dim = 0
    for i in range(1, len(pts)):
        if placed_dim < k:
            rows = [list(vsub(local[j], local[span_members[0]]))
                    for j in span_members[1:]]
            if _rational.rank(rows + [list(vsub(local[i],
                                                local[span_members[0]]))]) \
                    > placed_dim:
                simplices = [s + (i,) for s in simplices]
                span_members.append(i)
                placed_dim += 1
                continue
        visible = []
        for g, apex in _simplex_boundary(simplices):
            if placed_dim == 0:
                continue
            normal, offset = _hyperplane_through([local[t] for t in g],
                                                 placed_dim)
            side_apex = dot(normal, local[apex]) - offset
            side_p = dot(normal, local[i]) - offset
            if side_p * side_apex < 0:
                visible.append(g)
        simplices.extend(g + (i,) for g in visible)

    # Facet inequalities in ambient coordinates.
    ineqs = []
    if k:
        for g, apex in _simplex_boundary(simplices):
            normal, _ = _hyperplane_through([local[t] for t in g], k)
            phi = frame.ambient_normal(normal)
            offset = dot(phi, pts[g[0]])
            if dot(phi, pts[apex]) > offset:
                phi = tuple(-x for x in phi)
                offset = -offset
            ineqs.append(_int_ineq(phi, offset))
    # Span equations (pairs of opposite inequalities) pin degenerate hulls.
    for psi in _rational.kernel(frame.dirs, d) if k < d else ():
        phi_i, c = _int_ineq(psi, dot(psi, pts[0]))
        ineqs.append((phi_i, c))
        ineqs.append((tuple(-x for x in phi_i), -c))
    ineqs = sorted(set(ineqs))

    # Extreme points: active facet normals span the direction space.
    facet_only = [q for q in ineqs
                  if (tuple(-x for x in q[0]), -q[1]) not in ineqs]
    vertices = []
    for p in pts:
        if k == 0:
            vertices.append(p)
            continue
        active = [normal for normal, offset in facet_only
                  if dot(normal, p) == offset]
        proj = [[dot(normal, tuple(row)) for row in frame.dirs]
                for normal in active]
        if _rational.rank(proj) == k:
            vertices.append(p)

    for p in pts:
        assert all(dot(normal, p) <= offset for normal, offset in ineqs)
    return PolytopeHull(pts, vertices, ineqs, k, simplices)


def delta_cap(face_indices, config: Configuration, where: str = "columns"):
    """Intersections with the polytope of a column subset and the origin.

    In "columns" mode returns the columns of the configuration lying in
    Delta_F; in "lattice" mode returns every integer point of Delta_F,
    enumerated over the integer bounding box of the vertex set and
    filtered by the hull inequalities (cost is the product of the box side
    lengths).
    """
    if where not in ("columns", "lattice"):
        raise ValueError(f"unknown mode {where!r}")
    d = config.d
    pts = [(0,) * d] + [config.column(j) for j in sorted(face_indices)]
    h = hull(pts)
    if where == "columns":
        return [a for a in config.columns if h.contains(a)]
    ranges = []
    for c in range(d):
        vals = [v[c] for v in h.points]
        ranges.append(range(math.floor(min(vals)), math.ceil(max(vals)) + 1))
    return [p for p in product(*ranges) if h.contains(p)]


def lattice_volume(points) -> int:
    """Normalized lattice volume of conv(points) in its own span.

    The points are mapped to coordinates in a basis of the saturated
    direction lattice Z^d cap (span - span), triangulated, and the
    absolute simplex determinants summed; for a full-dimensional body in
    Z^d this is dim! times the Euclidean volume.  A single point counts
    as 1 (the empty determinant).
    """
    pts = [tuple(int(x) for x in p) for p in points]
    base = pts[0]
    dirs = Sublattice(len(base), [vsub(p, base) for p in pts])
    if dirs.rank == 0:
        return 1
    sat = saturate(dirs)
    mapped = [sat.coordinates(vsub(p, base)) for p in pts]
    h = hull(mapped)
    total = 0
    for s in h.triangulation:
        rows = [vsub(h.points[t], h.points[s[0]]) for t in s[1:]]
        total += abs(det(mat(tuple(int(x) for x in row) for row in rows)))
    return total


def normalized_volume(face_indices, config: Configuration,
                      lam: Sublattice) -> Fraction:
    """Normalized volume of a column subset in the lattice `lam`.

    Requires F within lam within Z^d cap QF with lam of full rank there
    (LambdaOutOfRange otherwise).  The value is the triangulated lattice
    volume measured in the saturation Z^d cap QF, divided by the index
    [Z^d cap QF : lam]; it is an exact rational, integral for every
    admissible lam.
    """
    d = config.d
    cols = [config.column(j) for j in sorted(face_indices)]
    span = Sublattice(d, cols)
    sat = saturate(span)
    if lam.ambient_dim != d or lam.rank != sat.rank:
        raise LambdaOutOfRange("lattice must have full rank in QF")
    for c in cols:
        if c not in lam:
            raise LambdaOutOfRange("F is not contained in the lattice")
    for b in lam.basis:
        if b not in sat:
            raise LambdaOutOfRange("lattice is not contained in Z^d cap QF")
    idx = lattice_index(lam, sat)
    if sat.rank == 0:
        return Fraction(1)
    mapped = [(0,) * sat.rank] + [sat.coordinates(c) for c in cols]
    h = hull(mapped)
    total = 0
    for s in h.triangulation:
        rows = [vsub(h.points[t], h.points[s[0]]) for t in s[1:]]
        total += abs(det(mat(tuple(int(x) for x in row) for row in rows)))
    return Fraction(total, idx)


def volume(config: Configuration) -> int:
    """Normalized volume of the whole configuration in Z^d."""
    val = normalized_volume(range(1, config.n + 1), config,
                            Sublattice.standard(config.d))
    return int(val)


def augment(tau, config: Configuration) -> int:
    """Index of a column a with Delta_{tau + {a}} cap A = tau + {a}.

    Implements the replacement procedure behind the volume lower bound:
    start from the lowest-index candidate (dimension-raising when
    Delta_tau is not full-dimensional), and while some other column lands
    in the enlarged polytope, swap it in; the excess set shrinks strictly,
    so this terminates.  Requires Delta_tau cap A = tau and tau proper.
    """
    tau = frozenset(tau)
    d = config.d
    if tau == frozenset(range(1, config.n + 1)):
        raise PreconditionViolated("tau already contains every column")
    cap = delta_cap(tau, config, "columns")
    if {config.column(j) for j in tau} != set(cap):
        raise PreconditionViolated("Delta_tau cap A != tau")
    tau_cols = [config.column(j) for j in tau]
    rank_tau = _int_rank(tau_cols)
    rest = [j for j in range(1, config.n + 1) if j not in tau]
    if rank_tau < d:
        candidates = [j for j in rest
                      if _int_rank(tau_cols + [config.column(j)])
                      == rank_tau + 1]
    else:
        candidates = rest
    a = min(candidates)
    while True:
        h = hull([(0,) * d] + tau_cols + [config.column(a)])
        excess = [j for j in rest
                  if j != a and h.contains(config.column(j))]
        if not excess:
            return a
        a = min(excess)


def is_pyramid(face: Face, config: Configuration) -> bool:
    """True iff the configuration is a pyramid over the face.

    Equivalent to n - |F| - codim(F) = 0; when it holds, Z^d splits as
    ZF plus the span of the off-face columns, which is asserted as a
    consistency check.
    """
    if config.n - len(face.indices) - face.codim != 0:
        return False
    zf = Sublattice(config.d, [config.column(j) for j in face.indices])
    rest = [config.column(j) for j in range(1, config.n + 1)
            if j not in face.indices]
    split = mat(list(zf.basis) + rest)
    assert abs(det(split)) == 1, "pyramid lattice split failed"
    return True

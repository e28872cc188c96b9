"""Small dense linear algebra over Fraction, used by the geometry code.

Everything here is exact; inputs may mix ints and Fractions.  Matrices are
lists/tuples of row sequences.  These routines are only ever called on
desk-scale systems (dimensions below ~10), so simple Gaussian elimination
is the right tool.
"""

from __future__ import annotations

from fractions import Fraction


def _rows(m):
    return [[Fraction(x) for x in row] for row in m]


def rank(m) -> int:
    """Rank of a rational matrix."""
    a = _rows(m)
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
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
        r += 1
    return r


def solve_right(m, target):
    """One rational solution x of x . m = target, or None if inconsistent.

    `m` has full row meaning: x has one entry per row of m.  Solved by
    eliminating on the transposed system.
    """
    nr = len(m)
    if nr == 0:
        return () if not any(Fraction(t) for t in target) else None
    nc = len(m[0])
    # Augmented columns: each equation is sum_i x_i * m[i][c] = target[c].
    a = [[Fraction(m[i][c]) for i in range(nr)] + [Fraction(target[c])]
         for c in range(nc)]
    pivots = []
    r = 0
    for c in range(nr):
        piv = next((i for i in range(r, nc) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nc):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    for i in range(r, nc):
        if a[i][nr]:
            return None
    x = [Fraction(0)] * nr
    for i, c in enumerate(pivots):
        x[c] = a[i][nr] / a[i][c]
    return tuple(x)


def invert(m):
    """Inverse of a square nonsingular rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        f = a[c][c]
        a[c] = [x / f for x in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                g = a[i][c]
                a[i] = [x - g * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


def kernel(m, ncols: int):
    """Basis of {x : m . x = 0} over the rationals (rows act on column x)."""
    a = _rows(m)
    nr = len(a)
    pivots = {}
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nr) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(nr):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots[c] = r
        r += 1
    basis = []
    free = [c for c in range(ncols) if c not in pivots]
    for cf in free:
        v = [Fraction(0)] * ncols
        v[cf] = Fraction(1)
        for c, i in pivots.items():
            v[c] = -a[i][cf] / a[i][c]
        basis.append(tuple(v))
    return basis

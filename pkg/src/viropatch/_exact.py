"""Exact rational linear algebra and gift-wrapping convex hulls.

Everything here works on tuples of ``int``/``Fraction``; nothing touches floats.
The point sets handled by the package are small (a few hundred points at most,
ambient dimension <= 4), so clarity wins over asymptotics.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]


def as_fraction_vector(v: Iterable) -> Vector:
    return tuple(Fraction(x) for x in v)


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(Fraction(x) - y for x, y in zip(a, b))


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : rows @ x = 0}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(pivots):
            x[p] = -red[i][f]
        basis.append(x)
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None when singular."""
    n = len(matrix)
    aug = [list(matrix[i]) + [rhs[i]] for i in range(n)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        return None
    return [red[i][n] for i in range(n)]


def det(matrix: Sequence[Sequence]) -> Fraction:
    mat = [[Fraction(x) for x in r] for r in matrix]
    n = len(mat)
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            result = -result
        result *= mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c] != 0:
                f = mat[i][c] / mat[c][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[c])]
    return result


def primitive(coeffs: Sequence[Fraction]) -> Tuple[int, ...]:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


class AffineFrame:
    """Affine coordinates on the affine hull of a point set."""

    def __init__(self, points: Sequence[Sequence]):
        if not points:
            raise ValueError("empty point set")
        self.ambient = len(points[0])
        self.origin = as_fraction_vector(points[0])
        basis: List[Vector] = []
        for p in points[1:]:
            d = sub(p, self.origin)
            if rank(basis + [d], self.ambient) > len(basis):
                basis.append(d)
                if len(basis) == self.ambient:
                    break
        self.basis = basis
        self.dim = len(basis)
        if self.dim:
            # coordinates solve p - origin = sum c_i basis_i on a set of pivot columns
            red, pivots = rref(basis, self.ambient)
            self._pivots = pivots
            sq = [[basis[i][c] for c in pivots] for i in range(self.dim)]  # dim x dim
            # inverse of sq^T
            tr = [[sq[j][i] for j in range(self.dim)] for i in range(self.dim)]
            self._inv = _inverse(tr)
        else:
            self._pivots = []
            self._inv = []

    def coords(self, p: Sequence) -> Vector:
        d = sub(p, self.origin)
        rhs = [d[c] for c in self._pivots]
        return tuple(sum((self._inv[i][j] * rhs[j] for j in range(self.dim)), Fraction(0))
                     for i in range(self.dim))

    def contains(self, p: Sequence) -> bool:
        c = self.coords(p)
        d = sub(p, self.origin)
        recon = [sum((c[i] * self.basis[i][k] for i in range(self.dim)), Fraction(0))
                 for k in range(self.ambient)]
        return list(d) == recon


def _inverse(mat: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(mat)
    aug = [list(mat[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def affine_dimension(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    return AffineFrame(points).dim


# ---------------------------------------------------------------------------
# Convex hulls by gift wrapping.
#
# A halfspace is (c, off) meaning c.x - off >= 0.  Facets are identified by
# their set of tight point indices, which makes degenerate inputs harmless.
# ---------------------------------------------------------------------------

Halfspace = Tuple[Tuple[Fraction, ...], Fraction]


def _value(h: Halfspace, p: Sequence) -> Fraction:
    return dot(h[0], p) - h[1]


def _normalize(c: Sequence[Fraction], off: Fraction) -> Halfspace:
    ints = primitive(list(c) + [off])
    return tuple(Fraction(x) for x in ints[:-1]), Fraction(ints[-1])


def _vanishing_functions(pts: Sequence[Sequence], dim: int) -> List[List[Fraction]]:
    """Affine functions (c, off) as vectors [c..., -off] vanishing on pts."""
    rows = [list(p) + [Fraction(1)] for p in pts]
    return nullspace(rows, dim + 1)


def hull_facets(pts: Sequence[Sequence]) -> List[Tuple[FrozenSet[int], Halfspace]]:
    """Facets of conv(pts) for a full-dimensional point set in R^k.

    Returns pairs (tight index set, halfspace) with the halfspace valid (>= 0) on
    every point.  For k == 0 there are no facets.
    """
    pts = [as_fraction_vector(p) for p in pts]
    k = len(pts[0]) if pts else 0
    if k == 0:
        return []
    if k == 1:
        lo = min(p[0] for p in pts)
        hi = max(p[0] for p in pts)
        return [
            (frozenset(i for i, p in enumerate(pts) if p[0] == lo), ((Fraction(1),), lo)),
            (frozenset(i for i, p in enumerate(pts) if p[0] == hi), ((Fraction(-1),), -hi)),
        ]
    h = _initial_facet(pts, k)
    tight = frozenset(i for i, p in enumerate(pts) if _value(h, p) == 0)
    found: Dict[FrozenSet[int], Halfspace] = {tight: h}
    queue = [tight]
    while queue:
        face = queue.pop()
        h = found[face]
        idx = sorted(face)
        sub_pts = [pts[i] for i in idx]
        frame = AffineFrame(sub_pts)
        local = [frame.coords(p) for p in sub_pts]
        for ridge_local, _ in hull_facets(local):
            ridge = [idx[i] for i in ridge_local]
            lam = _ridge_rotation(pts, k, h, ridge, face)
            best = None
            for i, p in enumerate(pts):
                hv = _value(h, p)
                if hv > 0:
                    r = -_value(lam, p) / hv
                    if best is None or r > best:
                        best = r
            new_c = tuple(best * a + b for a, b in zip(h[0], lam[0]))
            new_h = _normalize(new_c, best * h[1] + lam[1])
            new_tight = frozenset(i for i, p in enumerate(pts) if _value(new_h, p) == 0)
            if new_tight not in found:
                found[new_tight] = new_h
                queue.append(new_tight)
    return sorted(found.items(), key=lambda kv: sorted(kv[0]))


def _ridge_rotation(pts, k, h, ridge, face) -> Halfspace:
    """Affine function vanishing on the ridge, independent of h, positive on face."""
    for vec in _vanishing_functions([pts[i] for i in ridge], k):
        c, off = tuple(vec[:k]), -vec[k]
        if rank([list(h[0]) + [h[1]], list(c) + [off]], k + 1) == 2:
            lam = (c, off)
            break
    else:  # pragma: no cover - ridge always has codimension 2
        raise AssertionError("ridge is not of codimension two")
    q = next(i for i in face if i not in set(ridge))
    if _value(lam, pts[q]) < 0:
        lam = (tuple(-x for x in lam[0]), -lam[1])
    return lam


def _initial_facet(pts, k) -> Halfspace:
    lo = min(p[0] for p in pts)
    h: Halfspace = (tuple(Fraction(int(i == 0)) for i in range(k)), lo)
    while True:
        tight = [p for p in pts if _value(h, p) == 0]
        if affine_dimension(tight) == k - 1:
            return _normalize(*h)
        for vec in _vanishing_functions(tight, k):
            c, off = tuple(vec[:k]), -vec[k]
            if rank([list(h[0]) + [h[1]], list(c) + [off]], k + 1) == 2:
                lam = (c, off)
                break
        if all(_value(lam, p) >= 0 for p in pts):
            lam = (tuple(-x for x in lam[0]), -lam[1])
        t = min(_value(h, p) / -_value(lam, p) for p in pts if _value(lam, p) < 0)
        h = (tuple(a + t * b for a, b in zip(h[0], lam[0])), h[1] + t * lam[1])


def extreme_points(pts: Sequence[Sequence]) -> List[int]:
    """Indices of the vertices of conv(pts) (any affine dimension)."""
    pts = [as_fraction_vector(p) for p in pts]
    uniq: Dict[Vector, int] = {}
    for i, p in enumerate(pts):
        uniq.setdefault(p, i)
    reps = list(uniq.values())
    frame = AffineFrame([pts[i] for i in reps])
    if frame.dim == 0:
        return [reps[0]]
    local = [frame.coords(pts[i]) for i in reps]
    facets = hull_facets(local)
    out = []
    for j, i in enumerate(reps):
        normals = [list(h[0]) for face, h in facets if j in face]
        if rank(normals, frame.dim) == frame.dim:
            out.append(i)
    return sorted(out)


def pulling_triangulation(
    pts: Sequence[Sequence],
    order: Optional[Callable[[FrozenSet[int]], Callable[[int], object]]] = None,
) -> List[Tuple[int, ...]]:
    """Pulling triangulation of conv(pts) using only its vertices.

    ``order(face)`` returns a sort key over point indices for the given face;
    the face's first vertex under that key is pulled.  By default the key is
    the lexicographic order of the coordinates, which makes the triangulation
    of each face depend on that face alone.
    """
    pts = [as_fraction_vector(p) for p in pts]
    if order is None:
        def order(face):
            return lambda i: pts[i]
    memo: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}

    def tri(face: FrozenSet[int]) -> List[Tuple[int, ...]]:
        if face in memo:
            return memo[face]
        idx = sorted(face)
        frame = AffineFrame([pts[i] for i in idx])
        if frame.dim == 0:
            result = [(min(idx, key=order(face)),)]
        else:
            local = [frame.coords(pts[i]) for i in idx]
            verts = [idx[j] for j in extreme_points(local)]
            apex = min(verts, key=order(face))
            result = []
            for sub_face, _ in hull_facets(local):
                sub = frozenset(idx[j] for j in sub_face)
                if apex in sub:
                    continue
                for simplex in tri(sub):
                    result.append(tuple(sorted((apex,) + simplex)))
        memo[face] = result
        return result

    return sorted(set(tri(frozenset(range(len(pts))))))


def simplex_volume(vertices: Sequence[Sequence]) -> Fraction:
    """Normalized volume (d! times euclidean) of a full-dimensional simplex."""
    base = vertices[0]
    return abs(det([sub(v, base) for v in vertices[1:]]))


def polytope_volume(pts: Sequence[Sequence]) -> Fraction:
    """Normalized volume of conv(pts), assumed full-dimensional."""
    pts = [as_fraction_vector(p) for p in pts]
    if affine_dimension(pts) < len(pts[0]):
        return Fraction(0)
    return sum((simplex_volume([pts[i] for i in s]) for s in pulling_triangulation(pts)),
               Fraction(0))

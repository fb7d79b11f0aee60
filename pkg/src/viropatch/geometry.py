"""Lattice polytopes, orthant symmetries and affine unimodular maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple

from . import _exact

Point = Tuple[int, ...]


class DimensionMismatch(ValueError):
    pass


def _points(pts: Iterable[Sequence[int]]) -> Tuple[Point, ...]:
    return tuple(sorted({tuple(int(x) for x in p) for p in pts}))


@dataclass(frozen=True)
class OrthantLabel:
    bits: Tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"orthant bits must be 0/1, got {self.bits}")

    def __xor__(self, other: "OrthantLabel") -> "OrthantLabel":
        return OrthantLabel(tuple(a ^ b for a, b in zip(self.bits, other.bits)))

    def __len__(self):
        return len(self.bits)

    @classmethod
    def zero(cls, n: int) -> "OrthantLabel":
        return cls((0,) * n)


def all_orthants(n: int) -> List[Tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=n))


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of integer points, stored by its vertices only."""

    dim_ambient: int
    vertices: Tuple[Point, ...]

    @classmethod
    def from_points(cls, pts: Iterable[Sequence[int]]) -> "LatticePolytope":
        pts = _points(pts)
        if not pts:
            raise ValueError("polytope needs at least one point")
        n = len(pts[0])
        if any(len(p) != n for p in pts):
            raise DimensionMismatch("points of different lengths")
        verts = tuple(sorted(pts[i] for i in _exact.extreme_points(pts)))
        return cls(n, verts)

    @cached_property
    def dim(self) -> int:
        return _exact.affine_dimension(self.vertices)

    @cached_property
    def _frame(self) -> _exact.AffineFrame:
        return _exact.AffineFrame(self.vertices)

    @cached_property
    def _local_facets(self):
        local = [self._frame.coords(v) for v in self.vertices]
        return _exact.hull_facets(local)

    def facets(self) -> List["Face"]:
        """Facets as faces; for a full-dimensional polytope each carries its halfspace."""
        return [Face(self, frozenset(self.vertices[i] for i in idx))
                for idx, _ in self._local_facets]

    def halfspaces(self) -> List[_exact.Halfspace]:
        """Halfspaces c.x >= off in ambient coordinates (full-dimensional only)."""
        if self.dim != self.dim_ambient:
            raise ValueError("halfspace description needs a full-dimensional polytope")
        return [h for _, h in _exact.hull_facets(self.vertices)]

    def contains(self, p: Sequence) -> bool:
        if len(p) != self.dim_ambient:
            raise DimensionMismatch("point dimension differs from polytope")
        frame = self._frame
        if not frame.contains(p):
            return False
        if self.dim == 0:
            return True
        q = frame.coords(p)
        return all(_exact.dot(c, q) >= off for _, (c, off) in self._local_facets)

    def interior_contains(self, p: Sequence) -> bool:
        """Strict interior membership (full-dimensional polytopes)."""
        return all(_exact.dot(c, p) > off for c, off in self.halfspaces())

    def lattice_points(self) -> List[Point]:
        lo = [min(v[i] for v in self.vertices) for i in range(self.dim_ambient)]
        hi = [max(v[i] for v in self.vertices) for i in range(self.dim_ambient)]
        ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
        return [p for p in itertools.product(*ranges) if self.contains(p)]

    def normalized_volume(self) -> Fraction:
        """d! times the euclidean volume, in the polytope's ambient space (0 if flat)."""
        return _exact.polytope_volume(self.vertices)

    def faces(self) -> List["Face"]:
        """All nonempty faces, including the polytope itself."""
        out = {frozenset(self.vertices): None}
        stack = [Face(self, frozenset(self.vertices))]
        while stack:
            f = stack.pop()
            for g in f.facets():
                if g.vertices not in out:
                    out[g.vertices] = None
                    stack.append(g)
        return [Face(self, vs) for vs in sorted(out, key=lambda s: (len(s), sorted(s)))]

    def __repr__(self) -> str:
        return f"LatticePolytope({list(self.vertices)})"


@dataclass(frozen=True)
class Face:
    """A face of a lattice polytope, given by its vertex subset."""

    polytope: LatticePolytope = field(repr=False)
    vertices: frozenset

    @property
    def dim(self) -> int:
        return _exact.affine_dimension(sorted(self.vertices))

    def as_polytope(self) -> LatticePolytope:
        return LatticePolytope(self.polytope.dim_ambient, tuple(sorted(self.vertices)))

    def facets(self) -> List["Face"]:
        if self.dim <= 0:
            return []
        return [Face(self.polytope, f.vertices) for f in self.as_polytope().facets()]

    def directions(self) -> List[Point]:
        vs = sorted(self.vertices)
        return [tuple(a - b for a, b in zip(v, vs[0])) for v in vs[1:]]


def standard_simplex(m: int, n: int) -> LatticePolytope:
    """T_m^n: the simplex with vertices 0 and m times the unit points."""
    if m <= 0 or n <= 0:
        raise ValueError(f"standard_simplex needs m, n >= 1, got m={m}, n={n}")
    verts = [(0,) * n] + [tuple(m if j == i else 0 for j in range(n)) for i in range(n)]
    return LatticePolytope(n, tuple(sorted(verts)))


def simplex_lattice_points(m: int, n: int) -> List[Point]:
    """Lattice points of T_m^n in lexicographic order."""
    out = []
    for p in itertools.product(range(m + 1), repeat=n):
        if sum(p) <= m:
            out.append(p)
    return out


@dataclass(frozen=True)
class AffineUnimodularMap:
    linear: Tuple[Tuple[int, ...], ...]
    translation: Point

    def __post_init__(self):
        n = len(self.linear)
        if any(len(r) != n for r in self.linear) or len(self.translation) != n:
            raise DimensionMismatch("linear part must be square and match the translation")
        if abs(_exact.det(self.linear)) != 1:
            raise ValueError("linear part is not unimodular")

    @property
    def n(self) -> int:
        return len(self.translation)

    @classmethod
    def identity(cls, n: int) -> "AffineUnimodularMap":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (0,) * n)

    @classmethod
    def translate(cls, t: Sequence[int]) -> "AffineUnimodularMap":
        ident = cls.identity(len(t))
        return cls(ident.linear, tuple(t))

    def __call__(self, p: Sequence):
        if len(p) != self.n:
            raise DimensionMismatch("point dimension differs from map")
        return tuple(sum(a * x for a, x in zip(row, p)) + b
                     for row, b in zip(self.linear, self.translation))

    def compose(self, other: "AffineUnimodularMap") -> "AffineUnimodularMap":
        """self after other."""
        lin = tuple(tuple(sum(self.linear[i][k] * other.linear[k][j] for k in range(self.n))
                          for j in range(self.n)) for i in range(self.n))
        return AffineUnimodularMap(lin, self(other.translation))

    def inverse(self) -> "AffineUnimodularMap":
        inv = _exact._inverse([[Fraction(x) for x in r] for r in self.linear])
        lin = tuple(tuple(int(x) for x in r) for r in inv)
        t = tuple(-sum(a * b for a, b in zip(r, self.translation)) for r in lin)
        return AffineUnimodularMap(lin, t)


def apply_map(delta: AffineUnimodularMap, P: LatticePolytope) -> LatticePolytope:
    if delta.n != P.dim_ambient:
        raise DimensionMismatch("map and polytope dimensions differ")
    return LatticePolytope(P.dim_ambient, tuple(sorted(delta(v) for v in P.vertices)))


def minkowski_sum(P: LatticePolytope, Q: LatticePolytope) -> LatticePolytope:
    if P.dim_ambient != Q.dim_ambient:
        raise DimensionMismatch("Minkowski summands live in different dimensions")
    sums = [tuple(a + b for a, b in zip(p, q)) for p in P.vertices for q in Q.vertices]
    return LatticePolytope.from_points(sums)


def reflect(g, w: Sequence):
    bits = g.bits if isinstance(g, OrthantLabel) else tuple(g)
    if len(bits) != len(w):
        raise DimensionMismatch("orthant label and point differ in length")
    return tuple(-x if b else x for b, x in zip(bits, w))


def integer_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> List[Point]:
    """A Z-basis of {a in Z^n : r.a = 0 for every row r}.

    Column-reduces the row matrix with unimodular operations, tracking them in
    U; the columns of U paired with zero columns of the reduced matrix span the
    kernel lattice.
    """
    A = [list(map(int, r)) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j, k, q):  # col_j -= q * col_k
        for r in A:
            r[j] -= q * r[k]
        for r in U:
            r[j] -= q * r[k]

    def swap(j, k):
        for r in A + U:
            r[j], r[k] = r[k], r[j]

    pivot_col = 0
    for r in range(len(A)):
        if pivot_col >= n:
            break
        while True:
            nz = [j for j in range(pivot_col, n) if A[r][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(A[r][j]))
            swap(pivot_col, j0)
            done = True
            for j in range(pivot_col + 1, n):
                if A[r][j]:
                    colop(j, pivot_col, A[r][j] // A[r][pivot_col])
                    if A[r][j]:
                        done = False
            if done:
                pivot_col += 1
                break
    return [tuple(U[i][j] for i in range(n)) for j in range(pivot_col, n)]


def gf2_span(gens: Iterable[Sequence[int]], n: int) -> List[Tuple[int, ...]]:
    span = {(0,) * n}
    for g in gens:
        g2 = tuple(x % 2 for x in g)
        span |= {tuple(a ^ b for a, b in zip(s, g2)) for s in span}
    return sorted(span)


def face_normal_parities(face) -> List[Tuple[int, ...]]:
    """Mod-2 reductions of the integer vectors orthogonal to a face, as a subgroup.

    ``face`` may be a :class:`Face`, a :class:`LatticePolytope` or a list of points.
    """
    if isinstance(face, Face):
        pts = sorted(face.vertices)
    elif isinstance(face, LatticePolytope):
        pts = list(face.vertices)
    else:
        pts = [tuple(p) for p in face]
    n = len(pts[0])
    dirs = [tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]]
    dirs = [d for d in dirs if any(d)]
    return gf2_span(integer_kernel_basis(dirs, n), n)


def simplex_minimal_face(m: int, point: Sequence) -> Tuple[Tuple[int, ...], bool]:
    """Minimal face of T_m^n containing |point|: (zero coordinates, on outer facet)."""
    zeros = tuple(i for i, x in enumerate(point) if x == 0)
    return zeros, sum(abs(x) for x in point) == m


def simplex_face_parities(n: int, zeros: Sequence[int], outer: bool) -> List[Tuple[int, ...]]:
    """face_normal_parities for the face of T_m^n cut out by y_i = 0 (i in zeros) and,
    if ``outer``, the facet sum(y) = m.  Closed form of the general routine."""
    gens = [tuple(int(j == i) for j in range(n)) for i in zeros]
    if outer:
        gens.append((1,) * n)
    return gf2_span(gens, n)


def reflected_copies(P: LatticePolytope, g) -> LatticePolytope:
    return LatticePolytope(P.dim_ambient, tuple(sorted(reflect(g, v) for v in P.vertices)))


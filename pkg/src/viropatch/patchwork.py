"""Combinatorial patchworking on T_m^n.

Points of the glued space are kept in doubled integer coordinates: a lattice
vertex w seen in orthant g sits at 2*g(w), and the midpoint of an edge (w, w')
sits at g(w + w').  With that convention every cell is a tuple of integer
points, and the quotient identification of the outer facet of T_m^n is
X ~ -X (the coordinate-hyperplane identifications happen for free, since a
reflection fixes points with a zero coordinate).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import _exact
from .geometry import OrthantLabel, Point, all_orthants, reflect, simplex_lattice_points
from .homology import ChainComplexZ2, UnionFind, betti_z2, component_labels, euler_characteristic
from .triangulation import ConvexTriangulation

DPoint = Tuple[int, ...]
Cell = Tuple[DPoint, ...]


class NonPrimitiveCell(ValueError):
    pass


class SignMismatch(ValueError):
    pass


class UnknownPoint(KeyError):
    pass


@dataclass(frozen=True)
class SignDistribution:
    points: Tuple[Point, ...]
    signs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.points) != len(self.signs):
            raise SignMismatch("one sign per point is required")
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")

    @classmethod
    def of(cls, points: Iterable[Sequence[int]], signs: Iterable[int]) -> "SignDistribution":
        return cls(tuple(tuple(p) for p in points), tuple(int(s) for s in signs))

    @classmethod
    def from_bits(cls, points: Sequence[Point], bits: int) -> "SignDistribution":
        """Bit i set means the i-th point carries -1."""
        return cls(tuple(points), tuple(-1 if bits >> i & 1 else 1 for i in range(len(points))))

    def sign_at(self, w: Sequence[int]) -> int:
        try:
            return self.signs[self.points.index(tuple(w))]
        except ValueError:
            raise UnknownPoint(f"point {tuple(w)} is not in the sign distribution") from None

    def flipped(self) -> "SignDistribution":
        return SignDistribution(self.points, tuple(-s for s in self.signs))

    def bits(self) -> int:
        return sum(1 << i for i, s in enumerate(self.signs) if s < 0)


def orthant_sign(s: SignDistribution, g, w: Sequence[int]) -> int:
    bits = g.bits if isinstance(g, OrthantLabel) else tuple(g)
    parity = sum(b * x for b, x in zip(bits, w)) % 2
    return s.sign_at(w) * (-1) ** parity


def harnack_signs(m: int) -> SignDistribution:
    """Sign -1 exactly at the points of T_m^2 with both coordinates odd."""
    if m < 2 or m % 2:
        raise ValueError("harnack_signs needs an even degree m >= 2")
    pts = simplex_lattice_points(m, 2)
    return SignDistribution.of(pts, [-1 if i % 2 and j % 2 else 1 for i, j in pts])


# ---------------------------------------------------------------------------
# quotient canonicalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quotient:
    """Canonical representatives in the quotient of the 2^n copies of T_m^n.

    ``antipodal`` is False for the affine model used by odd-degree region
    complexes, where the outer identification would not respect signs.
    """

    m: int
    antipodal: bool = True

    def _outer(self, x: DPoint) -> bool:
        return sum(abs(c) for c in x) == 2 * self.m

    def point(self, x: DPoint) -> DPoint:
        if self.antipodal and self._outer(x):
            return min(x, tuple(-c for c in x))
        return x

    def cell(self, q: Iterable[DPoint]) -> Cell:
        q = tuple(sorted(q))
        if self.antipodal and all(self._outer(x) for x in q):
            return min(q, tuple(sorted(tuple(-c for c in x) for x in q)))
        return q


def _assemble(tops: Iterable[Cell], quot: Quotient) -> Tuple[List[List[Cell]], Dict[Cell, List[Cell]]]:
    """Close canonical top cells under faces; returns cells per dimension and face map."""
    by_dim: Dict[int, set] = {}
    faces: Dict[Cell, List[Cell]] = {}
    stack = []
    for t in tops:
        c = quot.cell(t)
        if c not in faces:
            faces[c] = []
            stack.append(c)
    while stack:
        c = stack.pop()
        by_dim.setdefault(len(c) - 1, set()).add(c)
        if len(c) == 1:
            continue
        fs = [quot.cell(c[:i] + c[i + 1:]) for i in range(len(c))]
        faces[c] = fs
        for f in fs:
            if f not in faces:
                faces[f] = []
                stack.append(f)
    if not by_dim:
        return [], {}
    top = max(by_dim)
    return [sorted(by_dim.get(d, ())) for d in range(top + 1)], faces


@dataclass
class PatchworkComplex:
    """A glued complex; vertices are doubled integer coordinates (halve to get points)."""

    n: int
    m: int
    kind: str
    cells: List[List[Cell]]
    chain: ChainComplexZ2 = field(repr=False)

    @classmethod
    def build(cls, n: int, m: int, kind: str, tops: Iterable[Cell],
              quot: Optional[Quotient] = None) -> "PatchworkComplex":
        quot = quot or Quotient(m)
        cells, faces = _assemble(tops, quot)
        chain = ChainComplexZ2.from_cells(cells, faces) if cells else ChainComplexZ2([], [])
        return cls(n, m, kind, cells, chain)

    @classmethod
    def from_cells(cls, n: int, m: int, kind: str, cells: List[List[Cell]]) -> "PatchworkComplex":
        """Rebuild from exported canonical cells (faces recomputed with the quotient rule)."""
        quot = Quotient(m, antipodal=kind != "region-affine")
        cells = [sorted(tuple(tuple(p) for p in c) for c in level) for level in cells]
        faces = {}
        for level in cells[1:]:
            for c in level:
                faces[c] = [quot.cell(c[:i] + c[i + 1:]) for i in range(len(c))]
        chain = ChainComplexZ2.from_cells(cells, faces) if cells else ChainComplexZ2([], [])
        return cls(n, m, kind, cells, chain)

    def betti(self) -> List[int]:
        width = self.n if self.kind == "hypersurface" else self.n + 1
        b = betti_z2(self.chain) if self.chain.counts else []
        return b + [0] * (width - len(b))

    def euler_characteristic(self) -> int:
        return euler_characteristic(self.chain)

    def components(self) -> int:
        return len(set(component_labels(self.chain)))

    def vertex_points(self) -> List[Tuple[Fraction, ...]]:
        return [tuple(Fraction(c, 2) for c in v[0]) for v in (self.cells[0] if self.cells else [])]


# ---------------------------------------------------------------------------
# per-triangulation skeleton
# ---------------------------------------------------------------------------

class Skeleton:
    """Orthant copies of every top simplex of a primitive triangulation of T_m^n."""

    def __init__(self, tau: ConvexTriangulation, require_primitive: bool = True):
        pts = tau.config.points
        self.points = pts
        self.n = len(pts[0])
        self.m = max(sum(p) for p in pts)
        if set(pts) != set(simplex_lattice_points(self.m, self.n)):
            raise ValueError("configuration must be all lattice points of T_m^n")
        if require_primitive:
            for c in tau.cells:
                if len(c) != self.n + 1 or _exact.simplex_volume([pts[i] for i in c]) != 1:
                    raise NonPrimitiveCell(f"cell {list(c)} is not a primitive simplex")
        self.tau = tau
        self.quot = Quotient(self.m)
        self.orthants = all_orthants(self.n)
        self.parity = [[sum(b * x for b, x in zip(g, p)) % 2 for p in pts] for g in self.orthants]
        self._edge_table = None

    def vertex(self, g, i: int) -> DPoint:
        return tuple(2 * c for c in reflect(g, self.points[i]))

    def midpoint(self, g, i: int, j: int) -> DPoint:
        return reflect(g, tuple(a + b for a, b in zip(self.points[i], self.points[j])))

    def sign_bits(self, s: SignDistribution) -> List[int]:
        if len(s.points) != len(self.points):
            raise SignMismatch("sign distribution and configuration differ in size")
        lookup = dict(zip(s.points, s.signs))
        try:
            return [int(lookup[p] < 0) for p in self.points]
        except KeyError as exc:
            raise SignMismatch(f"no sign for configuration point {exc.args[0]}") from None

    def copies(self):
        for gi, g in enumerate(self.orthants):
            for cell in self.tau.cells:
                yield gi, g, cell

    # fast path for b_0 of curves / hypersurfaces --------------------------
    def edge_table(self):
        """Per orthant copy: list of (i, j, midpoint id, parity flip)."""
        if self._edge_table is None:
            ids: Dict[DPoint, int] = {}
            table = []
            for gi, g, cell in self.copies():
                edges = []
                for i, j in itertools.combinations(cell, 2):
                    key = self.quot.point(self.midpoint(g, i, j))
                    mid = ids.setdefault(key, len(ids))
                    edges.append((i, j, mid, self.parity[gi][i] ^ self.parity[gi][j]))
                table.append(edges)
            self._edge_table = (table, len(ids))
        return self._edge_table

    def b0_fast(self, bits: int) -> int:
        """Number of components of the patchworked hypersurface (sign bits as an int)."""
        table, size = self.edge_table()
        parent = list(range(size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        active = set()
        for edges in table:
            first = None
            for i, j, mid, flip in edges:
                if ((bits >> i) ^ (bits >> j) ^ flip) & 1:
                    active.add(mid)
                    if first is None:
                        first = mid
                    else:
                        a, b = find(first), find(mid)
                        if a != b:
                            parent[a] = b
        return len({find(x) for x in active})


_SKELETONS: Dict[Tuple[int, bool], Skeleton] = {}
_SKELETON_CACHE_SIZE = 8


def skeleton(tau: ConvexTriangulation, require_primitive: bool = True) -> Skeleton:
    """Skeleton of tau, reused across calls on the same triangulation object."""
    key = (id(tau), require_primitive)
    sk = _SKELETONS.get(key)
    if sk is None or sk.tau is not tau:
        sk = Skeleton(tau, require_primitive)
        if len(_SKELETONS) >= _SKELETON_CACHE_SIZE:
            del _SKELETONS[next(iter(_SKELETONS))]
        _SKELETONS[key] = sk
    return sk


# ---------------------------------------------------------------------------
# chart pieces
# ---------------------------------------------------------------------------

def _product_pulling(A: Tuple[int, ...], B: Tuple[int, ...], key) -> List[Tuple[Tuple[int, int], ...]]:
    """Pulling triangulation of the product of simplices A x B (vertices are pairs)."""
    memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], list] = {}

    def tri(A, B):
        if (A, B) in memo:
            return memo[(A, B)]
        if len(A) == 1 and len(B) == 1:
            out = [((A[0], B[0]),)]
        else:
            apex = min(((a, b) for a in A for b in B), key=key)
            out = []
            if len(A) > 1:
                out += [(apex,) + s for s in tri(tuple(x for x in A if x != apex[0]), B)]
            if len(B) > 1:
                out += [(apex,) + s for s in tri(A, tuple(x for x in B if x != apex[1]))]
        memo[(A, B)] = out
        return out

    return tri(tuple(A), tuple(B))


def _orthant_bits(sk: Skeleton, bits: Sequence[int], gi: int, cell) -> Tuple[list, list]:
    plus = [i for i in cell if not bits[i] ^ sk.parity[gi][i]]
    minus = [i for i in cell if bits[i] ^ sk.parity[gi][i]]
    return plus, minus


def chart_piece(sk: Skeleton, bits: Sequence[int], gi: int, cell) -> List[Cell]:
    """Triangulated chart piece of one orthant copy of a primitive simplex."""
    g = sk.orthants[gi]
    plus, minus = _orthant_bits(sk, bits, gi, cell)
    if not plus or not minus:
        return []

    def key(ab):
        return sk.quot.point(sk.midpoint(g, *ab))

    simplices = _product_pulling(tuple(plus), tuple(minus), key)
    return [tuple(sorted(sk.midpoint(g, a, b) for a, b in s)) for s in simplices]


def region_piece(sk: Skeleton, bits: Sequence[int], gi: int, cell, sign: int,
                 quot: Quotient) -> Tuple[List[Cell], bool]:
    """Chosen-sign part of one orthant copy, triangulated; second value flags a mixed copy."""
    g = sk.orthants[gi]
    plus, minus = _orthant_bits(sk, bits, gi, cell)
    same, other = (plus, minus) if sign > 0 else (minus, plus)
    if not same:
        return [], False
    if not other:
        return [tuple(sorted(sk.vertex(g, i) for i in cell))], False
    pts = [sk.vertex(g, i) for i in same] + [sk.midpoint(g, a, b) for a in same for b in other]
    keys = [quot.point(p) for p in pts]
    simplices = _exact.pulling_triangulation(pts, order=lambda face: (lambda i: keys[i]))
    return [tuple(sorted(pts[i] for i in s)) for s in simplices], True


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

def hypersurface_complex(tau: ConvexTriangulation, s: SignDistribution) -> PatchworkComplex:
    sk = skeleton(tau)
    bits = sk.sign_bits(s)
    tops = []
    for gi, _, cell in sk.copies():
        tops.extend(chart_piece(sk, bits, gi, cell))
    return PatchworkComplex.build(sk.n, sk.m, "hypersurface", tops, sk.quot)


def ambient_complex(tau: ConvexTriangulation) -> PatchworkComplex:
    sk = skeleton(tau, require_primitive=False)
    tops = [tuple(sorted(sk.vertex(g, i) for i in cell)) for _, g, cell in sk.copies()]
    return PatchworkComplex.build(sk.n, sk.m, "ambient", tops, sk.quot)


@dataclass
class RegionComplex:
    complex: PatchworkComplex
    closed_flags: List[bool]

    @property
    def component_count(self) -> int:
        return len(self.closed_flags)


def region_complex(tau: ConvexTriangulation, s: SignDistribution, sign_choice: int) -> RegionComplex:
    """The closed part of C_T where the patchworked polynomial has the chosen sign.

    For odd m the sign is not defined on the projective quotient, so the region
    is built on the union of orthant copies without the outer identification.
    """
    if sign_choice not in (1, -1):
        raise ValueError("sign_choice must be +1 or -1")
    sk = skeleton(tau)
    bits = sk.sign_bits(s)
    quot = Quotient(sk.m, antipodal=sk.m % 2 == 0)
    tops, mixed = [], set()
    for gi, _, cell in sk.copies():
        pieces, is_mixed = region_piece(sk, bits, gi, cell, sign_choice, quot)
        tops.extend(pieces)
        if is_mixed:
            mixed.update(quot.cell(p) for p in pieces)
    kind = "region" if quot.antipodal else "region-affine"
    cx = PatchworkComplex.build(sk.n, sk.m, kind, tops, quot)
    if not cx.cells:
        return RegionComplex(cx, [])
    labels = component_labels(cx.chain)
    vindex = {c[0]: i for i, c in enumerate(cx.cells[0])}
    comp_mixed: Dict[int, bool] = {}
    for lab in labels:
        comp_mixed.setdefault(lab, False)
    for c in cx.cells[-1]:
        lab = labels[vindex[quot.point(c[0])]]
        if c in mixed:
            comp_mixed[lab] = True
    flags = [not comp_mixed[lab] for lab in sorted(comp_mixed)]
    return RegionComplex(cx, flags)


def double_plane_b0(region: RegionComplex) -> int:
    bounded = sum(1 for f in region.closed_flags if not f)
    closed = sum(1 for f in region.closed_flags if f)
    return bounded + 2 * closed


def component_separates(tau: ConvexTriangulation, s: SignDistribution) -> List[bool]:
    """For each component of the patchworked hypersurface, whether it separates C_T.

    Components are ordered like the roots of the hypersurface complex's vertex
    labels.  The complement of a component is explored through lattice
    vertices: same-sign vertices of a copy stay connected, and so do all
    vertices of a copy whose chart piece belongs to another component.
    """
    sk = skeleton(tau)
    bits = sk.sign_bits(s)
    hyp = hypersurface_complex(tau, s)
    if not hyp.cells:
        return []
    labels = component_labels(hyp.chain)
    vindex = {c[0]: i for i, c in enumerate(hyp.cells[0])}
    comps = sorted(set(labels))
    vid: Dict[DPoint, int] = {}
    copy_info = []
    for gi, g, cell in sk.copies():
        verts = [vid.setdefault(sk.quot.point(sk.vertex(g, i)), len(vid)) for i in cell]
        plus, minus = _orthant_bits(sk, bits, gi, cell)
        comp = None
        if plus and minus:
            comp = labels[vindex[sk.quot.point(sk.midpoint(g, plus[0], minus[0]))]]
        side = [bits[i] ^ sk.parity[gi][i] for i in cell]
        copy_info.append((verts, side, comp))
    out = []
    for c in comps:
        uf = UnionFind(len(vid))
        for verts, side, comp in copy_info:
            if comp == c:
                for sgn in (0, 1):
                    grp = [v for v, sd in zip(verts, side) if sd == sgn]
                    for v in grp[1:]:
                        uf.union(grp[0], v)
            else:
                for v in verts[1:]:
                    uf.union(verts[0], v)
        out.append(uf.count() == 2)
    return out


def exhaustive_b0(tau: ConvexTriangulation) -> Dict[int, int]:
    """Histogram of b_0 over every sign distribution (first point's sign fixed to +).

    A global sign flip leaves the hypersurface unchanged, so fixing one sign
    halves the work without losing any value.
    """
    sk = skeleton(tau)
    hist: Dict[int, int] = {}
    for half in range(1 << (len(sk.points) - 1)):
        b0 = sk.b0_fast(half << 1)
        hist[b0] = hist.get(b0, 0) + 1
    return hist

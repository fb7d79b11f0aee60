"""Z/2 chain complexes: Betti numbers, Euler characteristic and components."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Sequence, Tuple

DENSE_LIMIT = 20000


class MalformedComplex(ValueError):
    """The boundary maps do not compose to zero."""


class UnionFind:
    def __init__(self, n: int = 0):
        self.parent = list(range(n))
        self.rank = [0] * n

    def add(self) -> int:
        self.parent.append(len(self.parent))
        self.rank.append(0)
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True

    def count(self) -> int:
        return sum(1 for i in range(len(self.parent)) if self.find(i) == i)


@dataclass
class ChainComplexZ2:
    """Cells per dimension with boundary columns stored as int bitmasks.

    ``boundaries[d][j]`` has bit i set when (d-1)-cell i is a face of d-cell j;
    ``boundaries[0]`` is all zeros.
    """

    counts: List[int]
    boundaries: List[List[int]]
    labels: List[List[Hashable]] = field(default_factory=list)

    def __post_init__(self):
        if len(self.counts) != len(self.boundaries):
            raise MalformedComplex("one boundary list per dimension is required")
        for d, (c, cols) in enumerate(zip(self.counts, self.boundaries)):
            if len(cols) != c:
                raise MalformedComplex(f"dimension {d}: {c} cells but {len(cols)} columns")
            if d == 0 and any(cols):
                raise MalformedComplex("vertices must have empty boundary")
            if d > 0:
                limit = 1 << self.counts[d - 1]
                if any(col >= limit or col < 0 for col in cols):
                    raise MalformedComplex(f"dimension {d}: boundary refers to a missing face")

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def check_boundary(self) -> None:
        for d in range(2, len(self.counts)):
            lower = self.boundaries[d - 1]
            for j, col in enumerate(self.boundaries[d]):
                acc = 0
                while col:
                    low = col & -col
                    acc ^= lower[low.bit_length() - 1]
                    col ^= low
                if acc:
                    raise MalformedComplex(f"boundary of boundary of {d}-cell {j} is nonzero")

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[Hashable]]) -> "ChainComplexZ2":
        """Simplicial complex generated by the given simplices (closure is added)."""
        faces: Dict[int, set] = {}
        for s in simplices:
            s = tuple(sorted(set(s)))
            for k in range(1, len(s) + 1):
                for f in itertools.combinations(s, k):
                    faces.setdefault(k - 1, set()).add(f)
        if not faces:
            return cls([], [])
        top = max(faces)
        ordered = [sorted(faces.get(d, ())) for d in range(top + 1)]
        index = [{f: i for i, f in enumerate(level)} for level in ordered]
        boundaries = [[0] * len(ordered[0])]
        for d in range(1, top + 1):
            cols = []
            for f in ordered[d]:
                col = 0
                for i in range(len(f)):
                    col |= 1 << index[d - 1][f[:i] + f[i + 1:]]
                cols.append(col)
            boundaries.append(cols)
        return cls([len(level) for level in ordered], boundaries, ordered)

    @classmethod
    def from_cells(cls, cells: Sequence[Sequence[Hashable]],
                   faces: Dict[Hashable, Sequence[Hashable]]) -> "ChainComplexZ2":
        """Cell complex from per-dimension keys and an explicit face map.

        Faces listed an even number of times cancel, as they should over Z/2.
        """
        index = [{k: i for i, k in enumerate(level)} for level in cells]
        boundaries = [[0] * len(cells[0])] if cells else []
        for d in range(1, len(cells)):
            cols = []
            for k in cells[d]:
                col = 0
                for f in faces[k]:
                    if f not in index[d - 1]:
                        raise MalformedComplex(f"face {f!r} of {k!r} is not a cell")
                    col ^= 1 << index[d - 1][f]
                cols.append(col)
            boundaries.append(cols)
        return cls([len(level) for level in cells], boundaries, [list(c) for c in cells])


def rank_dense(columns: Sequence[int]) -> int:
    """Rank over Z/2 of bitmask columns, pivoting on the highest set bit."""
    pivots: Dict[int, int] = {}
    for col in columns:
        while col:
            top = col.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = col
                break
            col ^= p
    return len(pivots)


def rank_sparse(columns: Sequence[int]) -> int:
    """Same rank with set-based columns reduced by their lowest entry."""
    pivots: Dict[int, set] = {}
    for col in columns:
        entries = set()
        while col:
            low = col & -col
            entries.add(low.bit_length() - 1)
            col ^= low
        while entries:
            low = min(entries)
            p = pivots.get(low)
            if p is None:
                pivots[low] = entries
                break
            entries ^= p
    return len(pivots)


def _rank(columns: Sequence[int], rows: int) -> int:
    if len(columns) + rows <= DENSE_LIMIT:
        return rank_dense(columns)
    return rank_sparse(columns)


def betti_z2(K: ChainComplexZ2, check: bool = True) -> List[int]:
    if check:
        K.check_boundary()
    ranks = [0] * (len(K.counts) + 1)
    for d in range(1, len(K.counts)):
        ranks[d] = _rank(K.boundaries[d], K.counts[d - 1])
    return [K.counts[d] - ranks[d] - ranks[d + 1] for d in range(len(K.counts))]


def euler_characteristic(K: ChainComplexZ2) -> int:
    return sum((-1) ** d * c for d, c in enumerate(K.counts))


def component_labels(K: ChainComplexZ2) -> List[int]:
    """Root label per vertex, via union-find over the 1-skeleton."""
    if not K.counts:
        return []
    uf = UnionFind(K.counts[0])
    if len(K.counts) > 1:
        for col in K.boundaries[1]:
            ends = [i for i in range(col.bit_length()) if col >> i & 1]
            if len(ends) == 2:
                uf.union(*ends)
    return [uf.find(i) for i in range(K.counts[0])]


def connected_components(K: ChainComplexZ2) -> int:
    return len(set(component_labels(K)))


def barycentric_subdivision(simplices: Iterable[Sequence[Hashable]]) -> List[Tuple]:
    """Top simplices of the barycentric subdivision, vertices labelled by faces."""
    out = []
    for s in simplices:
        s = tuple(sorted(set(s)))
        for perm in itertools.permutations(s):
            out.append(tuple(tuple(sorted(perm[:k])) for k in range(1, len(s) + 1)))
    return out

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from viropatch.homology import (ChainComplexZ2, MalformedComplex, UnionFind,
                                barycentric_subdivision, betti_z2, connected_components,
                                euler_characteristic, rank_dense, rank_sparse)

from oracles import gf2_rank

RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
       (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4)]
TORUS = [t for i in range(7) for t in ((i, (i + 1) % 7, (i + 3) % 7), (i, (i + 2) % 7, (i + 3) % 7))]
SPHERE = [f for f in itertools.combinations(range(4), 3)]


def circle_cells():
    # two vertices a, b and two edges e, f both running from a to b
    return ChainComplexZ2.from_cells([["a", "b"], ["e", "f"]], {"e": ["a", "b"], "f": ["a", "b"]})


def test_minimal_circle():
    K = circle_cells()
    assert betti_z2(K) == [1, 1]
    assert euler_characteristic(K) == 0


def test_projective_plane():
    K = ChainComplexZ2.from_simplices(RP2)
    assert K.counts == [6, 15, 10]
    assert betti_z2(K) == [1, 1, 1]
    assert euler_characteristic(K) == 1


def test_torus():
    K = ChainComplexZ2.from_simplices(TORUS)
    assert K.counts == [7, 21, 14]
    assert betti_z2(K) == [1, 2, 1]


def test_two_spheres():
    K = ChainComplexZ2.from_simplices(SPHERE + [tuple(x + 10 for x in f) for f in SPHERE])
    assert betti_z2(K) == [2, 0, 2]
    assert euler_characteristic(K) == 4
    assert connected_components(K) == 2


def test_empty_and_two_circles():
    assert connected_components(ChainComplexZ2([], [])) == 0
    two = ChainComplexZ2.from_simplices([(0, 1), (1, 2), (0, 2), (5, 6), (6, 7), (5, 7)])
    assert connected_components(two) == 2
    assert betti_z2(two) == [2, 2]


def test_malformed_boundary_detected():
    # a triangle whose boundary is only two of its edges
    K = ChainComplexZ2([3, 3, 1], [[0, 0, 0], [0b011, 0b110, 0b101], [0b011]])
    with pytest.raises(MalformedComplex):
        betti_z2(K)
    with pytest.raises(MalformedComplex):
        ChainComplexZ2([1, 1], [[0], [0b10]])
    with pytest.raises(MalformedComplex):
        ChainComplexZ2([1], [[0], [0]])
    with pytest.raises(MalformedComplex):
        ChainComplexZ2.from_cells([["a"], ["e"]], {"e": ["a", "z"]})


def test_paired_faces_cancel():
    # a loop edge attached twice to one vertex has zero boundary
    K = ChainComplexZ2.from_cells([["v"], ["e"]], {"e": ["v", "v"]})
    assert K.boundaries[1] == [0]
    assert betti_z2(K) == [1, 1]


@pytest.mark.parametrize("cx", [RP2, TORUS, SPHERE])
def test_barycentric_subdivision_preserves_betti(cx):
    before = betti_z2(ChainComplexZ2.from_simplices(cx))
    after = ChainComplexZ2.from_simplices(barycentric_subdivision(cx))
    assert betti_z2(after) == before
    assert after.counts[2] == 6 * len(cx)


def random_complex(rng):
    nv = rng.randint(1, 8)
    simplices = []
    for _ in range(rng.randint(1, 12)):
        k = rng.randint(1, min(4, nv))
        simplices.append(tuple(rng.sample(range(nv), k)))
    return ChainComplexZ2.from_simplices(simplices)


def dense_betti(K):
    ranks = [0] * (len(K.counts) + 1)
    for d in range(1, len(K.counts)):
        rows = [[col >> i & 1 for col in K.boundaries[d]] for i in range(K.counts[d - 1])]
        ranks[d] = gf2_rank(rows)
    return [K.counts[d] - ranks[d] - ranks[d + 1] for d in range(len(K.counts))]


def test_random_complexes_against_oracle():
    rng = random.Random(11)
    for _ in range(500):
        K = random_complex(rng)
        b = betti_z2(K)
        assert b == dense_betti(K)
        assert connected_components(K) == b[0]
        assert sum((-1) ** d * x for d, x in enumerate(b)) == euler_characteristic(K)


@given(st.lists(st.integers(0, (1 << 12) - 1), max_size=15))
def test_dense_and_sparse_rank_agree(cols):
    assert rank_dense(cols) == rank_sparse(cols)
    rows = [[c >> i & 1 for c in cols] for i in range(12)]
    assert rank_dense(cols) == (gf2_rank(rows) if cols else 0)


def test_sparse_path_used_for_large_complexes(monkeypatch):
    import viropatch.homology as h
    K = ChainComplexZ2.from_simplices(barycentric_subdivision(TORUS))
    dense = betti_z2(K)
    monkeypatch.setattr(h, "DENSE_LIMIT", 0)
    assert betti_z2(K) == dense == [1, 2, 1]


def test_union_find():
    uf = UnionFind(4)
    assert uf.union(0, 1) and not uf.union(1, 0)
    assert uf.add() == 4
    assert uf.count() == 4
    uf.union(2, 3)
    uf.union(3, 4)
    assert uf.find(2) == uf.find(4)
    assert uf.count() == 2

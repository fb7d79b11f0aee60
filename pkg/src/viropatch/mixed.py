"""Mixed subdivisions of T_k^n + T_2k^n induced by a pair of affine lifts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import _exact
from .geometry import AffineUnimodularMap, LatticePolytope, Point, simplex_lattice_points
from .triangulation import PointConfiguration, cell_functions, regular_subdivision

ORACLE_LIMIT = 10 ** 5


class NotMixed(ValueError):
    pass


class OracleTooLarge(ValueError):
    pass


def _corner(n: int, i: int, scale: int) -> Point:
    """Vertex i of T_scale^n: the origin for i = 0, scale * e_i otherwise."""
    return tuple(scale if j == i - 1 else 0 for j in range(n))


@dataclass(frozen=True)
class AffinePairLift:
    k: int
    n: int
    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise ValueError("k and n must be positive")
        if len(self.a) != self.n + 1 or len(self.b) != self.n + 1:
            raise ValueError("a and b need n + 1 values")
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))

    def u(self, i: int) -> Point:
        return _corner(self.n, i, self.k)

    def v(self, i: int) -> Point:
        return _corner(self.n, i, 2 * self.k)

    def keys(self) -> Tuple[Fraction, ...]:
        return tuple(2 * x - y for x, y in zip(self.a, self.b))

    def nu1(self, w: Sequence[int]) -> Fraction:
        return self.a[0] + sum((self.a[i + 1] - self.a[0]) * Fraction(x, self.k) for i, x in enumerate(w))

    def nu2(self, w: Sequence[int]) -> Fraction:
        return self.b[0] + sum((self.b[i + 1] - self.b[0]) * Fraction(x, 2 * self.k)
                               for i, x in enumerate(w))


MixedCell = Tuple[Tuple[int, ...], Tuple[int, ...]]


@dataclass(frozen=True)
class MixedSubdivision:
    lift: AffinePairLift
    sigma: Tuple[int, ...]
    cells: Tuple[MixedCell, ...]

    def cell_vertices(self, l: int) -> List[Point]:
        us, vs = self.cells[l]
        return _sum_vertices(self.lift, us, vs)

    def cell_polytope(self, l: int) -> LatticePolytope:
        return LatticePolytope.from_points(self.cell_vertices(l))

    def volumes(self) -> List[Fraction]:
        return [_exact.polytope_volume(self.cell_vertices(l)) for l in range(len(self.cells))]


def _sum_vertices(lift: AffinePairLift, us: Sequence[int], vs: Sequence[int]) -> List[Point]:
    return sorted({tuple(x + y for x, y in zip(lift.u(i), lift.v(j))) for i in us for j in vs})


def mixedness(lift: AffinePairLift) -> Optional[Tuple[int, ...]]:
    """The permutation sorting the keys 2a_i - b_i, or None if two keys coincide."""
    keys = lift.keys()
    if len(set(keys)) != len(keys):
        return None
    return tuple(sorted(range(len(keys)), key=lambda i: keys[i]))


def coinciding_keys(lift: AffinePairLift) -> List[Tuple[int, ...]]:
    keys = lift.keys()
    groups = {}
    for i, key in enumerate(keys):
        groups.setdefault(key, []).append(i)
    return [tuple(g) for g in groups.values() if len(g) > 1]


def mixed_subdivision(lift: AffinePairLift) -> MixedSubdivision:
    sigma = mixedness(lift)
    if sigma is None:
        raise NotMixed(f"keys 2a_i - b_i coincide: {coinciding_keys(lift)}")
    cells = tuple((tuple(sorted(sigma[: l + 1])), tuple(sorted(sigma[l:])))
                  for l in range(lift.n + 1))
    return MixedSubdivision(lift, sigma, cells)


@dataclass(frozen=True)
class OracleSubdivision:
    """Lower-hull subdivision of the sum configuration, with each cell's summand faces."""

    lift: AffinePairLift
    cells: Tuple[Tuple[Point, ...], ...]
    representation: Tuple[MixedCell, ...]

    def is_mixed(self) -> bool:
        n = self.lift.n
        return all(len(us) + len(vs) - 2 == n for us, vs in self.representation)

    def cell_vertex_sets(self) -> List[Tuple[Point, ...]]:
        return sorted(tuple(sorted(LatticePolytope.from_points(c).vertices)) for c in self.cells)


def lower_hull_oracle(lift: AffinePairLift) -> OracleSubdivision:
    """Brute force: lift every lattice sum w1 + w2 and take the lower hull."""
    k, n = lift.k, lift.n
    p1 = simplex_lattice_points(k, n)
    p2 = simplex_lattice_points(2 * k, n)
    if len(p1) * len(p2) > ORACLE_LIMIT:
        raise OracleTooLarge(f"{len(p1) * len(p2)} lattice pairs exceed the oracle limit")
    best = {}
    for w1 in p1:
        h1 = lift.nu1(w1)
        for w2 in p2:
            s = tuple(x + y for x, y in zip(w1, w2))
            h = h1 + lift.nu2(w2)
            if s not in best or h < best[s]:
                best[s] = h
    pts = simplex_lattice_points(3 * k, n)
    tau = regular_subdivision(PointConfiguration(tuple(pts)), [best[p] for p in pts])
    reps = []
    for cell, (c, _) in zip(tau.cells, cell_functions(tau)):
        f1 = [lift.a[i] - _exact.dot(c, lift.u(i)) for i in range(n + 1)]
        f2 = [lift.b[i] - _exact.dot(c, lift.v(i)) for i in range(n + 1)]
        reps.append((tuple(i for i in range(n + 1) if f1[i] == min(f1)),
                     tuple(i for i in range(n + 1) if f2[i] == min(f2))))
    cells = tuple(tuple(pts[i] for i in cell) for cell in tau.cells)
    return OracleSubdivision(lift, cells, tuple(reps))


def matches_oracle(sub: MixedSubdivision, oracle: OracleSubdivision) -> bool:
    """Cell-for-cell agreement of vertex sets and of the summand representation."""
    ours = sorted(tuple(sub.cell_vertices(l)) for l in range(len(sub.cells)))
    return (ours == oracle.cell_vertex_sets()
            and sorted(sub.cells) == sorted(oracle.representation))


@dataclass(frozen=True)
class CoordinateFaces:
    first: LatticePolytope
    second: LatticePolytope
    first_zero_coords: Tuple[int, ...]
    second_zero_coords: Tuple[int, ...]


def coordinate_faces(k: int, n: int, l: int) -> CoordinateFaces:
    """F_1^l = conv(u_0..u_l) and F_2^{n-l} = conv(v_l..v_n), with the homogeneous
    coordinates Z_j that vanish on the corresponding projective subspaces."""
    if not 0 <= l <= n:
        raise ValueError(f"l must lie in 0..{n}")
    first = LatticePolytope.from_points([_corner(n, i, k) for i in range(l + 1)])
    second = LatticePolytope.from_points([_corner(n, i, 2 * k) for i in range(l, n + 1)])
    return CoordinateFaces(first, second, tuple(range(l + 1, n + 1)), tuple(range(l)))


def chart_change_bits(l: int, g: Sequence[int]) -> Tuple[int, ...]:
    n = len(g)
    if not 1 <= l <= n:
        raise ValueError(f"l must lie in 1..{n}")
    el = g[l - 1]
    return tuple(e if i == l - 1 else e ^ el for i, e in enumerate(g))


def orthant_chart_change(l: int, g: Sequence[int]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    n = len(g)
    if not 1 <= l <= n - 1:
        raise ValueError(f"l must lie in 1..{n - 1}")
    alpha = chart_change_bits(l, g)
    return alpha[:l], alpha[l:]


def swap_map(k: int, n: int, l: int, scale: int = 1) -> AffineUnimodularMap:
    """Unimodular map of T_{scale*k}^n exchanging vertices 0 and l, fixing the others."""
    if not 1 <= l <= n:
        raise ValueError(f"l must lie in 1..{n}")
    linear = tuple(tuple(-1 if i == l - 1 else int(i == j) for j in range(n)) for i in range(n))
    return AffineUnimodularMap(linear, _corner(n, l, scale * k))

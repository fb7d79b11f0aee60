"""Regular subdivisions of point configurations and the constructions built on them."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import _exact
from .geometry import AffineUnimodularMap, LatticePolytope, Point, simplex_lattice_points


class EmptyConfiguration(ValueError):
    pass


class DegenerateCellError(ValueError):
    """A claimed cell does not span the configuration's dimension."""


class MissingLift(ValueError):
    pass


class IslandNotInterior(ValueError):
    pass


class OverlappingIslands(ValueError):
    pass


class CertificationBudgetExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class PointConfiguration:
    points: Tuple[Point, ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise ValueError("configuration points must be distinct")

    @classmethod
    def of(cls, pts) -> "PointConfiguration":
        return cls(tuple(tuple(int(x) for x in p) for p in pts))

    def __len__(self):
        return len(self.points)

    def index(self) -> Dict[Point, int]:
        return {p: i for i, p in enumerate(self.points)}

    @property
    def dim_ambient(self) -> int:
        return len(self.points[0])


@dataclass(frozen=True)
class ConvexTriangulation:
    """A subdivision of a configuration; cells are sorted tuples of point indices."""

    config: PointConfiguration
    cells: Tuple[Tuple[int, ...], ...]
    lift: Optional[Tuple[Fraction, ...]] = None

    @property
    def used_vertices(self) -> List[int]:
        return sorted({i for c in self.cells for i in c})

    def cell_points(self, c: int) -> List[Point]:
        return [self.config.points[i] for i in self.cells[c]]

    def is_simplicial(self) -> bool:
        d = _exact.affine_dimension(self.config.points)
        return all(len(c) == d + 1 for c in self.cells)


def _normalize_cells(cells) -> Tuple[Tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(c)) for c in cells))


# ---------------------------------------------------------------------------
# lower hull traversal
# ---------------------------------------------------------------------------

def _affine_eval(alpha, p):
    c, d = alpha
    return _exact.dot(c, p) + d


def regular_subdivision(config: PointConfiguration, lift: Sequence) -> ConvexTriangulation:
    """Project the lower faces of the lifted configuration.

    Cells are the sets of points lying on a lower facet, so a non-generic lift
    yields non-simplex cells instead of an arbitrary tie-break.
    """
    if len(config) == 0:
        raise EmptyConfiguration("empty configuration")
    if len(lift) != len(config):
        raise ValueError("lift must give one value per configuration point")
    nu = [Fraction(x) for x in lift]
    frame = _exact.AffineFrame(config.points)
    pts = [frame.coords(p) for p in config.points]
    n = frame.dim
    if n == 0:
        return ConvexTriangulation(config, ((0,),), tuple(nu))

    def tight(alpha) -> FrozenSet[int]:
        return frozenset(i for i, p in enumerate(pts) if nu[i] == _affine_eval(alpha, p))

    # initial lower facet: start from the horizontal support at min nu and tilt
    alpha = ((Fraction(0),) * n, min(nu))
    while True:
        t = tight(alpha)
        if _exact.affine_dimension([pts[i] for i in t]) == n:
            break
        rows = [list(pts[i]) + [Fraction(1)] for i in t]
        vec = _exact.nullspace(rows, n + 1)[0]
        lam = (tuple(vec[:n]), vec[n])
        if all(_affine_eval(lam, p) <= 0 for p in pts):
            lam = (tuple(-x for x in lam[0]), -lam[1])
        s = min((nu[i] - _affine_eval(alpha, p)) / _affine_eval(lam, p)
                for i, p in enumerate(pts) if _affine_eval(lam, p) > 0)
        alpha = (tuple(a + s * b for a, b in zip(alpha[0], lam[0])), alpha[1] + s * lam[1])

    found: Dict[FrozenSet[int], tuple] = {t: alpha}
    queue = [t]
    while queue:
        cell = queue.pop()
        alpha = found[cell]
        idx = sorted(cell)
        for _, (c, off) in _exact.hull_facets([pts[i] for i in idx]):
            lam = (c, -off)
            below = [(i, _affine_eval(lam, p)) for i, p in enumerate(pts)]
            below = [(i, v) for i, v in below if v < 0]
            if not below:
                continue
            s = min((nu[i] - _affine_eval(alpha, pts[i])) / -v for i, v in below)
            new = (tuple(a - s * b for a, b in zip(alpha[0], lam[0])), alpha[1] - s * lam[1])
            nt = tight(new)
            if nt not in found:
                found[nt] = new
                queue.append(nt)
    return ConvexTriangulation(config, _normalize_cells(found), tuple(nu))


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    cell: int
    point: Optional[int]
    reason: str


def _cell_interpolant(pts, nu, cell, n):
    """Affine function through the lifted points of an affinely independent subset."""
    basis = [cell[0]]
    for i in cell[1:]:
        cand = basis + [i]
        if _exact.affine_dimension([pts[j] for j in cand]) == len(cand) - 1:
            basis = cand
            if len(basis) == n + 1:
                break
    if len(basis) < n + 1:
        return None
    mat = [list(pts[i]) + [Fraction(1)] for i in basis]
    sol = _exact.solve(mat, [nu[i] for i in basis])
    return tuple(sol[:n]), sol[n]


def _threads() -> int:
    raw = os.environ.get("PATCHWORK_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"PATCHWORK_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"PATCHWORK_THREADS must be a positive integer, got {raw!r}")
    return value


def convexity_violation(tau: ConvexTriangulation) -> Optional[Violation]:
    """First reason the stored lift fails to induce the stored cells, or None."""
    if tau.lift is None:
        raise MissingLift("triangulation carries no lift")
    nu = [Fraction(x) for x in tau.lift]
    frame = _exact.AffineFrame(tau.config.points)
    pts = [frame.coords(p) for p in tau.config.points]
    n = frame.dim
    if n == 0:
        return None

    def check(ci: int) -> Optional[Violation]:
        cell = tau.cells[ci]
        alpha = _cell_interpolant(pts, nu, cell, n)
        if alpha is None:
            raise DegenerateCellError(f"cell {ci} {list(cell)} is not full-dimensional")
        members = set(cell)
        for i, p in enumerate(pts):
            val = _affine_eval(alpha, p)
            if i in members and nu[i] != val:
                return Violation(ci, i, "cell point lifted off the cell's affine interpolant")
            if i not in members and nu[i] <= val:
                return Violation(ci, i, "point not strictly above the cell's affine interpolant")
        return None

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(check, range(len(tau.cells))))
    for v in results:
        if v is not None:
            return v
    total = sum((_exact.polytope_volume([pts[i] for i in c]) for c in tau.cells), Fraction(0))
    if total != _exact.polytope_volume(pts):
        return Violation(-1, None, "cell volumes do not add up to the hull volume")
    return None


def certify_convexity(tau: ConvexTriangulation) -> bool:
    return convexity_violation(tau) is None


# ---------------------------------------------------------------------------
# primitive (staircase) triangulations, dilation and islands
# ---------------------------------------------------------------------------

def _partial_sums(p):
    return tuple(itertools.accumulate(p))


def staircase_lift(p: Sequence[int]) -> int:
    s = (0,) + _partial_sums(p)
    return sum((s[b] - s[a]) ** 2 for a in range(len(s)) for b in range(a + 1, len(s)))


def primitive_triangulation(m: int, n: int) -> ConvexTriangulation:
    """Staircase triangulation of T_m^n into m^n unimodular simplices."""
    if m < 1 or n < 1:
        raise ValueError("primitive_triangulation needs m, n >= 1")
    pts = simplex_lattice_points(m, n)
    index = {p: i for i, p in enumerate(pts)}

    def from_sums(s):
        return tuple(s[j] - (s[j - 1] if j else 0) for j in range(n))

    cells = set()
    for base in itertools.product(range(m), repeat=n):
        for perm in itertools.permutations(range(n)):
            cur = list(base)
            simplex = [tuple(cur)]
            for j in perm:
                cur[j] += 1
                simplex.append(tuple(cur))
            if all(0 <= s[0] and all(s[j] <= s[j + 1] for j in range(n - 1)) and s[-1] <= m
                   for s in simplex):
                cells.add(tuple(sorted(index[from_sums(s)] for s in simplex)))
    lift = tuple(Fraction(staircase_lift(p)) for p in pts)
    return ConvexTriangulation(PointConfiguration(tuple(pts)), _normalize_cells(cells), lift)


def trivial_subdivision(m: int, n: int) -> ConvexTriangulation:
    """T_m^n as a single cell on its vertices; other lattice points are lifted away."""
    pts = simplex_lattice_points(m, n)
    verts = tuple(i for i, p in enumerate(pts) if sum(p) in (0, m) and sum(1 for x in p if x) <= 1)
    lift = tuple(Fraction(0) if i in verts else Fraction(1) for i in range(len(pts)))
    return ConvexTriangulation(PointConfiguration(tuple(pts)), (verts,), lift)


def cell_functions(tau: ConvexTriangulation):
    """Affine interpolants alpha_C in ambient coordinates, one per cell."""
    pts = [tuple(Fraction(x) for x in p) for p in tau.config.points]
    n = len(pts[0])
    nu = [Fraction(x) for x in tau.lift]
    out = []
    for ci, cell in enumerate(tau.cells):
        alpha = _cell_interpolant(pts, nu, cell, n)
        if alpha is None:
            raise DegenerateCellError(f"cell {ci} is not full-dimensional")
        out.append(alpha)
    return out


def _envelope(alphas, p) -> Fraction:
    return max(_affine_eval(a, p) for a in alphas)


def dilate(tau: ConvexTriangulation, c: int) -> ConvexTriangulation:
    """Image of tau under x -> c x, on all lattice points of the dilated hull."""
    if c <= 0:
        raise ValueError("dilation factor must be positive")
    if tau.lift is None:
        raise MissingLift("dilate needs a certified lift")
    alphas = cell_functions(tau)
    hull = LatticePolytope.from_points(tau.config.points)
    big = LatticePolytope.from_points([tuple(c * x for x in v) for v in hull.vertices])
    pts = sorted(big.lattice_points())
    index = {p: i for i, p in enumerate(pts)}
    used = set(tau.used_vertices)
    scaled = {tuple(c * x for x in tau.config.points[i]): i for i in used}
    lift = []
    for p in pts:
        if p in scaled:
            lift.append(Fraction(tau.lift[scaled[p]]))
        else:
            lift.append(_envelope(alphas, [Fraction(x, c) for x in p]) + 1)
    cells = [[index[tuple(c * x for x in tau.config.points[i])] for i in cell]
             for cell in tau.cells]
    return ConvexTriangulation(PointConfiguration(tuple(pts)), _normalize_cells(cells),
                               tuple(lift))


def embed_islands(
    outer: ConvexTriangulation,
    islands: Sequence[Tuple[int, AffineUnimodularMap, ConvexTriangulation]],
    mu: Fraction = Fraction(1, 4),
    budget: int = 16,
) -> ConvexTriangulation:
    """Refine ``outer`` so that each island appears verbatim inside its host cell.

    The island region is lowered by mu and tilted by mu^2 times the normalized
    inner lift; host-cell vertices are pulled down by distinct powers of mu so
    the shell between island and host boundary is triangulated generically.
    Certification decides success; on failure mu is halved.
    """
    if outer.lift is None:
        raise MissingLift("outer triangulation carries no lift")
    if not islands:
        return ConvexTriangulation(outer.config, outer.cells, outer.lift)
    hosts = [h for h, _, _ in islands]
    if len(set(hosts)) != len(hosts):
        raise OverlappingIslands("an outer cell hosts more than one island")
    index = outer.config.index()
    alphas = cell_functions(outer)
    pts = outer.config.points
    frac_pts = [tuple(Fraction(x) for x in p) for p in pts]

    island_lift: Dict[int, Fraction] = {}
    island_cells = []
    host_vertices: List[int] = []
    for host, delta, inner in islands:
        host_poly = LatticePolytope.from_points(outer.cell_points(host))
        if host_poly.dim != host_poly.dim_ambient:
            raise DegenerateCellError(f"host cell {host} is not full-dimensional")
        images = [delta(p) for p in inner.config.points]
        for q in images:
            if not host_poly.interior_contains(q):
                raise IslandNotInterior(f"island point {q} is not interior to cell {host}")
            if q not in index:
                raise IslandNotInterior(f"island point {q} is not in the outer configuration")
        psi = [Fraction(x) for x in inner.lift]
        lo, hi = min(psi), max(psi)
        span = hi - lo if hi != lo else Fraction(1)
        for q, v in zip(images, psi):
            island_lift[index[q]] = (v - lo) / span
        island_cells.extend(tuple(sorted(index[images[i]] for i in cell)) for cell in inner.cells)
        host_vertices.extend(outer.cells[host])
    host_vertices = sorted(set(host_vertices), key=lambda i: pts[i])
    host_rank = {i: r for r, i in enumerate(host_vertices)}
    used = set(outer.used_vertices)
    base = [_envelope(alphas, p) for p in frac_pts]
    island_set = set(island_cells)
    dim = len(pts[0])

    for _ in range(budget):
        lift = []
        for i in range(len(pts)):
            if i in island_lift:
                lift.append(base[i] - mu + mu * mu * island_lift[i])
            elif i in host_rank:
                lift.append(base[i] - mu ** (3 + host_rank[i]))
            elif i in used:
                lift.append(base[i])
            else:
                lift.append(base[i] + 1)
        tau = regular_subdivision(outer.config, lift)
        cells = set(tau.cells)
        shell_ok = all(len(c) == dim + 1 for c in cells if c not in island_set)
        if shell_ok and island_set <= cells and certify_convexity(tau):
            return tau
        mu /= 2
    raise CertificationBudgetExhausted(f"no valid island lift found within {budget} halvings")

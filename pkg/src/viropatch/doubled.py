"""Bookkeeping for doubled hypersurfaces {f_k^2 - eps f_2k = 0}.

For n >= 2 only the component census and the Kunneth leading term are
modelled; n = 1 has an exact model where everything is a count of roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence


class TransversalityViolation(ValueError):
    pass


class InconsistentDimensions(ValueError):
    pass


@dataclass(frozen=True)
class BettiVector:
    values: tuple

    def __post_init__(self):
        if any(int(v) != v or v < 0 for v in self.values):
            raise ValueError("Betti numbers are nonnegative integers")

    @property
    def dim(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, i: int) -> int:
        return self.values[i] if 0 <= i < len(self.values) else 0

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def from_lower_half(cls, lower: Sequence[int], dim: int) -> "BettiVector":
        """Complete b_0..b_floor(dim/2) by the symmetry b_{dim-i} = b_i."""
        vals = [0] * (dim + 1)
        for i, b in enumerate(lower):
            vals[i] = b
            vals[dim - i] = b
        return cls(tuple(vals))


@dataclass(frozen=True)
class DoubledCensus:
    boundary_components: int
    closed_components: int

    def __post_init__(self):
        if self.boundary_components < 0 or self.closed_components < 0:
            raise ValueError("census counts must be nonnegative")


def doubled_b0_census(c: DoubledCensus) -> int:
    """A component with boundary doubles to one component, a closed one to two."""
    return c.boundary_components + 2 * c.closed_components


def _check_roots(roots: Sequence[Fraction], name: str) -> List[Fraction]:
    roots = [Fraction(r) for r in roots]
    if any(b <= a for a, b in zip(roots, roots[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return roots


def sign_table(roots_k, roots_2k, lead_sign_2k: int) -> List[tuple]:
    """(root of f_k, sign of f_2k there) for every root of f_k."""
    rk = _check_roots(roots_k, "roots_k")
    r2 = _check_roots(roots_2k, "roots_2k")
    if lead_sign_2k not in (1, -1):
        raise ValueError("lead_sign_2k must be +1 or -1")
    if len(r2) % 2:
        raise ValueError("roots_2k must have even length")
    common = set(rk) & set(r2)
    if common:
        raise TransversalityViolation("shared roots " + ", ".join(str(x) for x in sorted(common)))
    return [(r, lead_sign_2k * (-1) ** sum(1 for s in r2 if s > r)) for r in rk]


def doubled_b0_line(roots_k, roots_2k, lead_sign_2k: int) -> int:
    return 2 * sum(1 for _, sign in sign_table(roots_k, roots_2k, lead_sign_2k) if sign > 0)


def line_census(roots_k, roots_2k, lead_sign_2k: int) -> DoubledCensus:
    """In dimension one every positive root is a closed component of RX_{k,+}."""
    positive = sum(1 for _, s in sign_table(roots_k, roots_2k, lead_sign_2k) if s > 0)
    return DoubledCensus(0, positive)


def y0_point_count(constant_sign: int) -> int:
    if constant_sign not in (1, -1):
        raise ValueError("constant_sign must be +1 or -1")
    return 2 if constant_sign > 0 else 0


def kunneth_leading(i: int, bx: Sequence, by: Sequence) -> int:
    """sum over l = 1..n and p = 0..i of b_p(X^l) * b_{i-p}(Y^{n-l}).

    ``bx[l-1]`` has length l (dimension l - 1) and ``by[l-1]`` has length
    n - l + 1 (dimension n - l); entries beyond a vector's length count as 0.
    """
    if i < 0:
        raise ValueError("index must be nonnegative")
    n = len(bx)
    if len(by) != n:
        raise InconsistentDimensions("bx and by need one vector per l = 1..n")
    bx = [v if isinstance(v, BettiVector) else BettiVector(tuple(v)) for v in bx]
    by = [v if isinstance(v, BettiVector) else BettiVector(tuple(v)) for v in by]
    total = 0
    for l in range(1, n + 1):
        x, y = bx[l - 1], by[l - 1]
        if len(x) != l or len(y) != n - l + 1:
            raise InconsistentDimensions(
                f"l={l}: expected lengths {l} and {n - l + 1}, got {len(x)} and {len(y)}")
        total += sum(x[p] * y[i - p] for p in range(i + 1))
    return total

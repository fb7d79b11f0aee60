"""Closed formulas and recursions for the Betti-number coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Tuple


def total_betti_hypersurface(m: int, n: int) -> int:
    """b_* of a nonsingular degree-m hypersurface of CP^n."""
    if m < 1 or n < 1:
        raise ValueError("need m, n >= 1")
    value = Fraction((m - 1) ** (n + 1) + (-1) ** n, m) + n + (-1) ** (n + 1)
    assert value.denominator == 1, "non-integral total Betti number"
    return int(value)


def total_betti_double_plane(k: int, n: int) -> int:
    """b_* of the double cover of CP^n branched along a degree-2k hypersurface."""
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    value = Fraction((2 * k - 1) ** (n + 1) + (-1) ** n, 2 * k) + n + 1
    assert value.denominator == 1, "non-integral total Betti number"
    return int(value)


def hodge_c(n: int) -> Fraction:
    """Leading coefficient of the middle Hodge number of X_m^n, n odd."""
    if n < 1 or n % 2 == 0:
        raise ValueError("hodge_c needs an odd n")
    h = (n + 1) // 2
    s = sum((-1) ** j * comb(n + 1, h - j) * j ** n for j in range(1, h + 1))
    return Fraction((-1) ** h * s, factorial(n))


def hodge_cprime(n: int) -> Fraction:
    """Leading coefficient of the middle Hodge number of Y_2k^n, n even."""
    if n < 2 or n % 2:
        raise ValueError("hodge_cprime needs an even n >= 2")
    h = n // 2

    def a(j):
        return sum(t ** n for t in range(1, 2 * j))

    first = sum((-1) ** j * comb(n + 2, h + 1 - j) * a(j) for j in range(1, h + 2))
    second = 2 ** n * sum((-1) ** j * comb(n + 1, h - j) * j ** n for j in range(1, h + 1))
    return Fraction((-1) ** (h + 1) * (first + second), factorial(n))


def zeta_upper(i: int, n: int) -> Fraction:
    if n % 2 == 0:
        return Fraction(1, 2)
    c = hodge_c(n)
    return (1 + c) / 2 if i == (n - 1) // 2 else (1 + c) / 4


def delta_upper_smith_thom(i: int, n: int) -> Fraction:
    if n % 2:
        return Fraction(2 ** (n - 1))
    c = hodge_cprime(n)
    return (2 ** n + c) / 2 if i == n // 2 else (2 ** n + c) / 4


def upper_bounds(i: int, n: int) -> Tuple[Fraction, Fraction]:
    """(bound on zeta_{i,n}, bound on delta_{i,n}).

    For odd n and i = 0 the delta bound is the smaller of 2^(n-1) and
    2^n times the zeta bound.
    """
    if i < 0 or n < 1:
        raise ValueError("need i >= 0 and n >= 1")
    z = zeta_upper(i, n)
    d = delta_upper_smith_thom(i, n)
    if n % 2 and i == 0:
        d = min(d, 2 ** n * z)
    return z, d


@dataclass(frozen=True)
class Seeds:
    zeta01: Fraction = Fraction(1)
    zeta02: Fraction = Fraction(1, 2)
    delta00: Fraction = Fraction(2)
    delta01: Fraction = Fraction(1)
    delta02: Fraction = Fraction(27, 16)


def recursive_lower_bounds(max_n: int, seeds: Seeds = Seeds()) -> Dict[int, Tuple[Fraction, Fraction]]:
    """Lower bounds (zeta_{0,n}, delta_{0,n}) for n = 1..max_n."""
    if max_n < 3:
        raise ValueError("max_n must be at least 3")
    zeta = {1: Fraction(seeds.zeta01), 2: Fraction(seeds.zeta02)}
    delta = {0: Fraction(seeds.delta00), 1: Fraction(seeds.delta01), 2: Fraction(seeds.delta02)}
    for n in range(3, max_n + 1):
        s = sum((zeta[l] * delta[n - l] for l in range(1, n)), Fraction(0))
        zeta[n] = s / (2 ** n - 2)
        delta[n] = s + zeta[n]
    return {n: (zeta[n], delta[n]) for n in range(1, max_n + 1)}


def explicit_lower(n: int) -> Fraction:
    if n < 1:
        raise ValueError("n must be positive")
    return Fraction(1, 2 ** (n - 1))


def surface_bounds(delta02_lower, delta12_lower) -> Tuple[Fraction, Fraction]:
    d02, d12 = Fraction(delta02_lower), Fraction(delta12_lower)
    if d02 < 0 or d12 < 0:
        raise ValueError("inputs must be nonnegative")
    return d02 / 6 + Fraction(1, 12), d12 / 6 + Fraction(1, 6)


@dataclass(frozen=True)
class GapCheck:
    n: int
    holds: bool
    lower: Fraction
    t_bound: Fraction


def t_gap_check(n: int, seeds: Seeds = Seeds()) -> GapCheck:
    """Is the recursive lower bound for zeta_{0,n} above 2^(n-1)/n! ?"""
    if n < 4:
        raise ValueError("the gap check starts at n = 4")
    lower = recursive_lower_bounds(n, seeds)[n][0]
    bound = Fraction(2 ** (n - 1), factorial(n))
    return GapCheck(n, lower > bound, lower, bound)


@dataclass(frozen=True)
class BoundsRow:
    n: int
    zeta0_lower: Fraction
    zeta0_upper: Fraction
    delta0_lower: Fraction
    delta0_upper: Fraction

    def entries(self) -> List[Fraction]:
        return [self.zeta0_lower, self.zeta0_upper, self.delta0_lower, self.delta0_upper]


def table1(max_n: int = 7, seeds: Seeds = Seeds()) -> List[BoundsRow]:
    lower = recursive_lower_bounds(max(max_n, 3), seeds)
    rows = []
    for n in range(1, max_n + 1):
        z_up, d_up = upper_bounds(0, n)
        rows.append(BoundsRow(n, lower[n][0], z_up, lower[n][1], d_up))
    return rows

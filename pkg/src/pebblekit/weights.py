"""Exact-rational weight function, excess weight, and ceiling accounting.

The weight of a vertex u under a distribution D is sum_v D(v) * 2^-d(u,v):
the fractional pebble mass movable to u.  Excess is max(W - 1, 0).

Note on the excess definition: an alternative piecewise convention returns
W itself when W <= 1.  That convention is inconsistent with the ceiling
fixtures this package reproduces (a single pile of 2 pebbles must have
ceiling 17/2, two adjacent piles of 2 must have 29/4), so max(W - 1, 0) is
used throughout and the ceiling numerator is equivalently sum_v min(W(v), 1).

Two evaluation modes exist and are never mixed:

* grid mode evaluates weights on the distribution's own finite grid
  (plane or torus distances);
* infinite mode reads the support coordinates as points of the unbounded
  square grid, where a single pebble's weight contribution over all
  vertices totals exactly 9 (the self-term 2^0 included), so the ceiling
  numerator is 9|D| minus the total excess over the finite region where
  W can exceed 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .grid import AnyDistribution, ContinuousDistribution, Distribution, GridError, Vertex

#: Total weight contribution of one pebble to the whole unbounded grid,
#: self-term included: 1 + sum_{k>=1} 4k * 2^-k = 9.
PEBBLE_TOTAL_WEIGHT = Fraction(9)


@dataclass(frozen=True)
class WeightReport:
    """Per-vertex weights and the ceiling aggregates for one distribution."""

    weights: dict[Vertex, Fraction]
    excess: dict[Vertex, Fraction]
    total_weight: Fraction
    total_excess: Fraction
    ceiling: Fraction

    def to_json(self) -> dict:
        return {
            "rows": [
                {
                    "vertex": [v.col, v.row],
                    "w": str(self.weights[v]),
                    "excess": str(self.excess[v]),
                }
                for v in sorted(self.weights, key=lambda v: (v.row, v.col))
            ],
            "total_weight": str(self.total_weight),
            "total_excess": str(self.total_excess),
            "ceiling": str(self.ceiling),
        }


def weight(d: AnyDistribution, u) -> Fraction:
    """sum_v D(v) * 2^-d(u,v) on the distribution's grid."""
    u = d.grid.check(u)
    total = Fraction(0)
    for v, c in d.items():
        total += Fraction(c, 1) / 2 ** d.grid.distance(u, v)
    return total


def excess(d: AnyDistribution, u) -> Fraction:
    """max(W(u) - 1, 0)."""
    return max(weight(d, u) - 1, Fraction(0))


def weight_report(d: AnyDistribution) -> WeightReport:
    """Weights and excess at every grid vertex, with ceiling aggregates."""
    weights = {u: weight(d, u) for u in d.grid.vertices()}
    exc = {u: max(w - 1, Fraction(0)) for u, w in weights.items()}
    total_w = sum(weights.values(), Fraction(0))
    total_e = sum(exc.values(), Fraction(0))
    return WeightReport(
        weights=weights,
        excess=exc,
        total_weight=total_w,
        total_excess=total_e,
        ceiling=(total_w - total_e) / d.size,
    )


def covering_ratio_ceiling(d: AnyDistribution) -> Fraction:
    """(sum_v min(W(v), 1)) / |D| on the distribution's grid."""
    if d.size < 1:
        raise GridError("ceiling needs a non-empty distribution")
    num = Fraction(0)
    for u in d.grid.vertices():
        num += min(weight(d, u), Fraction(1))
    return num / d.size


def _infinite_weight(counts: dict, u: tuple) -> Fraction:
    total = Fraction(0)
    for (c0, r0), c in counts.items():
        dd = abs(u[0] - c0) + abs(u[1] - r0)
        total += Fraction(c, 1) / 2**dd
    return total


def infinite_excess_region(d: Distribution) -> set[tuple]:
    """Vertices of the unbounded grid where W can exceed 1: within distance
    ceil(log2 |D|) of the support (outside, W <= |D| * 2^-d <= 1)."""
    radius = math.ceil(math.log2(d.size)) if d.size > 1 else 0
    region: set[tuple] = set()
    for (c0, r0) in d.support:
        for dc in range(-radius, radius + 1):
            rem = radius - abs(dc)
            for dr in range(-rem, rem + 1):
                region.add((c0 + dc, r0 + dr))
    return region


def ceiling_infinite(d: Distribution) -> Fraction:
    """Covering ratio ceiling with the support read as a pattern on the
    unbounded grid: (9|D| - total excess) / |D|."""
    if d.size < 1:
        raise GridError("ceiling needs a non-empty distribution")
    counts = {(v.col, v.row): c for v, c in d.items()}
    total_excess = Fraction(0)
    for u in infinite_excess_region(d):
        total_excess += max(_infinite_weight(counts, u) - 1, Fraction(0))
    return (PEBBLE_TOTAL_WEIGHT * d.size - total_excess) / d.size


def _ceiling_numerator(d: AnyDistribution, infinite: bool) -> Fraction:
    if infinite:
        if not isinstance(d, Distribution):
            raise GridError("infinite mode needs an integer distribution")
        counts = {(v.col, v.row): c for v, c in d.items()}
        exc = sum(
            (max(_infinite_weight(counts, u) - 1, Fraction(0)) for u in infinite_excess_region(d)),
            Fraction(0),
        )
        return PEBBLE_TOTAL_WEIGHT * d.size - exc
    num = Fraction(0)
    for u in d.grid.vertices():
        num += min(weight(d, u), Fraction(1))
    return num


def marginal_covering_ratio_ceiling(
    d: Distribution, dplus: Distribution, infinite: bool = False
) -> Fraction:
    """Change of the ceiling numerator per added pebble, both terms evaluated
    in the same mode."""
    if not dplus.dominates(d):
        raise GridError("extended distribution must dominate the base pointwise")
    added = dplus.size - d.size
    if added <= 0:
        raise GridError("extended distribution must add at least one pebble")
    return (_ceiling_numerator(dplus, infinite) - _ceiling_numerator(d, infinite)) / added


def fractional_solvable(dc: ContinuousDistribution | Distribution) -> bool:
    """True iff every vertex has weight at least 1 (exact comparison)."""
    return all(weight(dc, u) >= 1 for u in dc.grid.vertices())


def single_pebble_weight_total(radius: int) -> Fraction:
    """Partial sum of one pebble's weight contributions out to the given
    distance on the unbounded grid: 1 + sum_{k<=radius} 4k * 2^-k.
    Monotone increasing with limit 9."""
    if radius < 0:
        raise GridError("radius must be non-negative")
    total = Fraction(1)
    for k in range(1, radius + 1):
        total += Fraction(4 * k, 2**k)
    return total


#: Lower bound on the excess weight at a unit of size k in any distribution
#: that covers the grid in the fractional sense: (12/25) * k.
UNIT_EXCESS_LOWER_BOUND = Fraction(12, 25)

#: Implied upper bound on n^2 / |D|: 9 - 12/25.
IFCOV_UPPER_BOUND = PEBBLE_TOTAL_WEIGHT - UNIT_EXCESS_LOWER_BOUND


@dataclass(frozen=True)
class IfcovBoundReport:
    """Accounting for the bound 9|D| >= n^2 + (12/25)|D|."""

    size: int
    n_squared: int
    ratio: Fraction
    excess_lower_bound: Fraction
    actual_total_excess: Fraction
    bound_constant: Fraction
    violated: bool

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "n_squared": self.n_squared,
            "ratio": str(self.ratio),
            "excess_lower_bound": str(self.excess_lower_bound),
            "actual_total_excess": str(self.actual_total_excess),
            "bound_constant": str(self.bound_constant),
            "violated": self.violated,
        }


def ifcov_bound_report(d: Distribution, n: int) -> IfcovBoundReport:
    """Bound accounting for a distribution meant to cover an n x n grid in
    the fractional sense.  A violation (actual excess below the per-unit
    lower bound) would falsify the implementation, not the bound."""
    if d.size < 1:
        raise GridError("bound report needs a non-empty distribution")
    lower = UNIT_EXCESS_LOWER_BOUND * d.size
    actual = sum((excess(d, v) for v in d.grid.vertices()), Fraction(0))
    return IfcovBoundReport(
        size=d.size,
        n_squared=n * n,
        ratio=Fraction(n * n, d.size),
        excess_lower_bound=lower,
        actual_total_excess=actual,
        bound_constant=IFCOV_UPPER_BOUND,
        violated=actual < lower,
    )

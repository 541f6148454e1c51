"""Exact pebbling-move semantics, reachability, and coverage.

Reachability is decided in two layers:

* Interaction clustering.  Pebbles from two groups of units can only ever
  combine at a vertex both groups reach on their own, so the distribution
  splits into clusters whose standalone coverages are pairwise disjoint.
  The clusters are computed by a fixed point: start with one cluster per
  unit (a single pile of c pebbles delivers exactly floor(c / 2^d) to
  distance d, so its coverage is a ball), then merge clusters whose
  coverages intersect and recompute until stable.  Any target is served by
  at most one cluster.

* Per-cluster search.  Within a cluster, reachability is a depth-first
  search over distribution states with a transposition table.  A pebbling
  move never increases the weight sum(c * 2^-d) at the target, and moves
  that step toward the target preserve it exactly, so states whose target
  weight drops below k are pruned without losing exactness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .grid import Distribution, GridError, GridSpec, Vertex

DEFAULT_NODE_CAP = 10**7

# Radius stages for restricted positive-only searches tried before the full
# exact search.  Dropping pebbles can only turn answers from true to false,
# so a restricted "true" is a certificate.
_RESTRICT_STAGES = (2, 3, 5)


class BudgetExceeded(RuntimeError):
    """The state-space search exceeded its node cap."""

    def __init__(self, target: Vertex, node_cap: int):
        super().__init__(f"search budget of {node_cap} states exceeded for target {tuple(target)}")
        self.target = target
        self.node_cap = node_cap


@dataclass(frozen=True)
class CoverageReport:
    """Reachable set, its size, the covering ratio, and boundary vertices."""

    reachable: frozenset[Vertex]
    cov: int
    ratio: Fraction
    boundary: frozenset[Vertex]


@lru_cache(maxsize=64)
def _pow2(d: int) -> Fraction:
    return Fraction(1, 2**d)


def apply_move(d: Distribution, frm, to) -> Distribution:
    """One pebbling move: remove two pebbles at frm, add one at to."""
    frm = d.grid.check(frm)
    to = d.grid.check(to)
    if to not in d.grid.neighbors(frm):
        raise GridError(f"{tuple(frm)} and {tuple(to)} are not adjacent")
    if d.get(frm) < 2:
        raise GridError(f"need at least 2 pebbles at {tuple(frm)}, have {d.get(frm)}")
    return d.with_pebbles(frm, -2).with_pebbles(to, 1)


class _Search:
    """DFS over distribution states for one (target, k) query."""

    def __init__(self, grid: GridSpec, t: Vertex, k: int, node_cap: int):
        self.grid = grid
        self.t = t
        self.k = k
        self.node_cap = node_cap
        self.nodes = 0
        self.dist = {v: grid.distance(v, t) for v in grid.vertices()}
        self.failed: set[frozenset] = set()
        self.witness: set[Vertex] = set()

    def run(self, counts: dict) -> bool:
        w = sum(c * _pow2(self.dist[v]) for v, c in counts.items())
        if w < self.k:
            return False
        hit = self._dfs(dict(counts), w)
        if hit:
            self.witness.update(counts)
        return hit

    def _dfs(self, state: dict, w: Fraction) -> bool:
        if state.get(self.t, 0) >= self.k:
            return True
        key = frozenset(state.items())
        if key in self.failed:
            return False
        self.nodes += 1
        if self.nodes > self.node_cap:
            raise BudgetExceeded(self.t, self.node_cap)
        moves = []
        for v, c in state.items():
            if c < 2:
                continue
            dv = self.dist[v]
            for u in self.grid.neighbors(v):
                nw = w - 2 * _pow2(dv) + _pow2(self.dist[u])
                if nw >= self.k:
                    moves.append((self.dist[u] >= dv, -c, v, u, nw))
        moves.sort()
        for _, _, v, u, nw in moves:
            state[v] -= 2
            if state[v] == 0:
                del state[v]
            state[u] = state.get(u, 0) + 1
            hit = self._dfs(state, nw)
            state[u] -= 1
            if state[u] == 0:
                del state[u]
            state[v] = state.get(v, 0) + 2
            if hit:
                # every vertex occupied along the witness is itself reachable
                self.witness.update(state)
                return True
        self.failed.add(key)
        return False


def _greedy_deliverable(grid: GridSpec, counts: dict, t: Vertex, trace: set | None = None) -> int:
    """Pebbles placed on t by repeatedly moving the farthest splittable pile
    one step toward t.  A legal sequence, hence a lower bound; cascades
    through intermediate accumulations are followed."""
    state = dict(counts)
    dist = {v: grid.distance(v, t) for v in state}
    while True:
        best = None
        for v, c in state.items():
            if v == t or c < 2:
                continue
            if best is None or (dist[v], v) > (dist[best], best):
                best = v
        if best is None:
            return state.get(t, 0)
        c = state[best]
        toward = [u for u in grid.neighbors(best) if grid.distance(u, t) < dist[best]]
        u = max(toward, key=lambda u: (state.get(u, 0), u))
        state[u] = state.get(u, 0) + c // 2
        state[best] = c % 2
        dist[u] = grid.distance(u, t)
        if trace is not None:
            trace.add(u)


class _Engine:
    """Reachability context for one distribution: interaction clusters plus
    per-target searches within them."""

    def __init__(self, d: Distribution, node_cap: int = DEFAULT_NODE_CAP):
        self.d = d
        self.grid = d.grid
        self.node_cap = node_cap
        self._clusters: list[dict] | None = None
        self._covs: list[frozenset] | None = None

    # -- clustering ------------------------------------------------------

    def clusters(self) -> list[tuple[dict, frozenset]]:
        if self._clusters is None:
            self._build_clusters()
        return list(zip(self._clusters, self._covs))

    def _build_clusters(self):
        grid = self.grid
        clusters: list[dict] = []
        covs: list[frozenset] = []
        for v, c in self.d.counts.items():
            clusters.append({v: c})
            # a single pile of c pebbles delivers floor(c / 2^d) to distance d
            covs.append(grid.ball(v, c.bit_length() - 1))
        merged = True
        while merged:
            merged = False
            for i in range(len(clusters)):
                for j in range(i + 1, len(clusters)):
                    if covs[i] & covs[j]:
                        counts = dict(clusters[i])
                        for v, c in clusters[j].items():
                            counts[v] = counts.get(v, 0) + c
                        del clusters[j], covs[j]
                        del clusters[i], covs[i]
                        clusters.append(counts)
                        covs.append(self._cluster_coverage(counts))
                        merged = True
                        break
                if merged:
                    break
        self._clusters = clusters
        self._covs = covs

    def _cluster_coverage(self, counts: dict) -> frozenset[Vertex]:
        grid = self.grid
        total = sum(counts.values())
        region: set[Vertex] = set()
        for v in counts:
            region |= grid.ball(v, total.bit_length())
        reachable = set(counts)
        for t in sorted(region, key=lambda t: min(grid.distance(t, v) for v in counts)):
            if t in reachable:
                continue
            if self._cluster_can_k(counts, t, 1, known=reachable):
                reachable.add(t)
        return frozenset(reachable)

    # -- per-cluster search ---------------------------------------------

    def _cluster_can_k(self, counts: dict, t: Vertex, k: int, known: set | None = None) -> bool:
        grid = self.grid
        if counts.get(t, 0) >= k:
            return True
        for v, c in counts.items():
            if c >> grid.distance(v, t) >= k:
                return True
        if sum(c * _pow2(grid.distance(v, t)) for v, c in counts.items()) < k:
            return False
        trace: set = set() if known is not None else None
        if _greedy_deliverable(grid, counts, t, trace) >= k:
            if known is not None:
                known.update(trace)
            return True
        tried = None
        for radius in _RESTRICT_STAGES:
            sub = {v: c for v, c in counts.items() if grid.distance(v, t) <= radius}
            if not sub or sub == tried or len(sub) == len(counts):
                continue
            tried = sub
            if sum(c * _pow2(grid.distance(v, t)) for v, c in sub.items()) < k:
                continue
            search = _Search(grid, t, k, max(self.node_cap // 20, 1000))
            try:
                if search.run(sub):
                    if known is not None:
                        known.update(search.witness)
                    return True
            except BudgetExceeded:
                pass
        search = _Search(grid, t, k, self.node_cap)
        hit = search.run(counts)
        if hit and known is not None:
            known.update(search.witness)
        return hit

    # -- queries ---------------------------------------------------------

    def can_move_k(self, t: Vertex, k: int) -> bool:
        for counts, cov in self.clusters():
            if t in cov:
                return k == 1 or self._cluster_can_k(counts, t, k)
        return False

    def reachable_set(self) -> frozenset[Vertex]:
        out: set[Vertex] = set()
        for _, cov in self.clusters():
            out |= cov
        return frozenset(out)


def can_move_k(d: Distribution, t, k: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff some move sequence accumulates >= k pebbles on t simultaneously."""
    t = d.grid.check(t)
    if k < 1:
        raise GridError("k must be >= 1")
    return _Engine(d, node_cap).can_move_k(t, k)


def is_reachable(d: Distribution, t, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff t holds a pebble or some move sequence places one on it."""
    return can_move_k(d, t, 1, node_cap)


def boundary_of(grid: GridSpec, reachable: frozenset[Vertex]) -> frozenset[Vertex]:
    """Reachable vertices with at least one non-reachable neighbor."""
    return frozenset(
        v for v in reachable if any(u not in reachable for u in grid.neighbors(v))
    )


def coverage(d: Distribution, node_cap: int = DEFAULT_NODE_CAP) -> CoverageReport:
    """Reachable set, Cov(D), exact covering ratio, and boundary vertices."""
    if d.size < 1:
        raise GridError("coverage needs a non-empty distribution")
    reachable = _Engine(d, node_cap).reachable_set()
    return CoverageReport(
        reachable=reachable,
        cov=len(reachable),
        ratio=Fraction(len(reachable), d.size),
        boundary=boundary_of(d.grid, reachable),
    )


def is_solvable(d: Distribution, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True iff every grid vertex is reachable."""
    if d.size < 1:
        return False
    return len(_Engine(d, node_cap).reachable_set()) == d.grid.size


def boundary_vertices(d: Distribution, node_cap: int = DEFAULT_NODE_CAP) -> frozenset[Vertex]:
    return coverage(d, node_cap).boundary


def interaction_vertices(
    d1: Distribution, d2: Distribution, node_cap: int = DEFAULT_NODE_CAP
) -> frozenset[Vertex]:
    """Vertices reachable under both distributions."""
    if d1.grid != d2.grid:
        raise GridError("distributions live on different grids")
    return _Engine(d1, node_cap).reachable_set() & _Engine(d2, node_cap).reachable_set()


def lonely_units(d: Distribution, node_cap: int = DEFAULT_NODE_CAP) -> frozenset[Vertex]:
    """Units whose singleton coverage is disjoint from the rest's coverage."""
    out = set()
    for v in d.support:
        alone = Distribution(d.grid, {v: d.counts[v]})
        rest = d.without_unit(v)
        rest_cov = _Engine(rest, node_cap).reachable_set() if rest.counts else frozenset()
        if not (_Engine(alone, node_cap).reachable_set() & rest_cov):
            out.add(v)
    return frozenset(out)


def marginal_covering_ratio(
    d: Distribution, dplus: Distribution, node_cap: int = DEFAULT_NODE_CAP
) -> Fraction:
    """(Cov(D') - Cov(D)) / (|D'| - |D|) for D' pointwise >= D."""
    if not dplus.dominates(d):
        raise GridError("extended distribution must dominate the base pointwise")
    added = dplus.size - d.size
    if added <= 0:
        raise GridError("extended distribution must add at least one pebble")
    cov_base = coverage(d, node_cap).cov
    cov_plus = coverage(dplus, node_cap).cov
    assert cov_plus >= cov_base, "coverage must be monotone under adding pebbles"
    return Fraction(cov_plus - cov_base, added)

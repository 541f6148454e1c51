from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from pebblekit.grid import Distribution, GridError, GridSpec, TORUS, Vertex
from pebblekit.reach import (
    BudgetExceeded,
    apply_move,
    boundary_vertices,
    can_move_k,
    coverage,
    interaction_vertices,
    is_reachable,
    is_solvable,
    lonely_units,
    marginal_covering_ratio,
)

from conftest import naive_max_at, naive_reachable


class TestApplyMove:
    def test_legal_move(self):
        d = Distribution(GridSpec(3, 3), {(0, 0): 2})
        d2 = apply_move(d, (0, 0), (1, 0))
        assert d2.get((0, 0)) == 0 and d2.get((1, 0)) == 1

    def test_needs_two_pebbles(self):
        d = Distribution(GridSpec(3, 3), {(0, 0): 1})
        with pytest.raises(GridError):
            apply_move(d, (0, 0), (1, 0))

    def test_needs_adjacency(self):
        d = Distribution(GridSpec(3, 3), {(0, 0): 2})
        with pytest.raises(GridError):
            apply_move(d, (0, 0), (2, 0))


class TestFixtures:
    def test_single_2unit_coverage(self):
        d = Distribution(GridSpec(7, 7), {(3, 3): 2})
        rep = coverage(d)
        assert rep.cov == 5
        assert rep.ratio == Fraction(5, 2)
        assert rep.reachable == frozenset(
            {Vertex(3, 3), Vertex(2, 3), Vertex(4, 3), Vertex(3, 2), Vertex(3, 4)}
        )

    def test_two_adjacent_2units_coverage(self):
        d = Distribution(GridSpec(8, 7), {(3, 3): 2, (4, 3): 2})
        rep = coverage(d)
        assert rep.cov == 8
        assert rep.ratio == Fraction(2)

    def test_four_pebbles_reach_distance_two(self):
        d = Distribution(GridSpec(7, 7), {(3, 3): 4})
        assert is_reachable(d, (5, 3))
        assert not is_reachable(d, (6, 3))
        assert can_move_k(d, (4, 3), 2)
        assert not can_move_k(d, (4, 3), 3)


class TestAgainstNaiveOracle:
    def all_small_distributions(self, spec, max_size):
        verts = list(spec.vertices())
        for size in range(1, max_size + 1):
            for combo in combinations_with_replacement(verts, size):
                counts = {}
                for v in combo:
                    counts[v] = counts.get(v, 0) + 1
                yield Distribution(spec, counts)

    @pytest.mark.parametrize("topology", ["plane", TORUS])
    def test_reachable_set_matches_naive(self, topology):
        spec = GridSpec(3, 3, topology)
        # spot-check a deterministic sample; the acceptance suite runs the
        # exhaustive |D| <= 5 sweep
        for i, d in enumerate(self.all_small_distributions(spec, 4)):
            if i % 17:
                continue
            assert coverage(d).reachable == naive_reachable(d), d.counts

    def test_can_move_k_matches_naive(self):
        spec = GridSpec(3, 3)
        cases = [
            {(0, 0): 4},
            {(0, 0): 4, (1, 1): 2},
            {(0, 0): 3, (2, 0): 3},
            {(1, 1): 5},
            {(0, 0): 2, (0, 2): 2, (2, 0): 2},
        ]
        for counts in cases:
            d = Distribution(spec, counts)
            for t in spec.vertices():
                top = naive_max_at(d, t)
                for k in range(1, top + 1):
                    assert can_move_k(d, t, k), (counts, tuple(t), k)
                assert not can_move_k(d, t, top + 1), (counts, tuple(t))


class TestQueries:
    def test_is_solvable(self):
        spec = GridSpec(2, 2)
        assert is_solvable(Distribution(spec, {(0, 1): 1, (1, 1): 2}))
        assert not is_solvable(Distribution(spec, {(0, 0): 2}))
        assert not is_solvable(Distribution(spec, {}))

    def test_boundary_vertices(self):
        d = Distribution(GridSpec(7, 7), {(3, 3): 2})
        b = boundary_vertices(d)
        # the four arm vertices touch unreachable ground; the center does not
        assert b == coverage(d).reachable - {Vertex(3, 3)}

    def test_boundary_empty_when_solvable(self):
        d = Distribution(GridSpec(2, 2), {(0, 1): 1, (1, 1): 2})
        assert boundary_vertices(d) == frozenset()

    def test_interaction_vertices(self):
        spec = GridSpec(9, 5)
        a = Distribution(spec, {(2, 2): 2})
        b = Distribution(spec, {(4, 2): 2})
        assert interaction_vertices(a, b) == frozenset({Vertex(3, 2)})
        far = Distribution(spec, {(7, 2): 2})
        assert interaction_vertices(a, far) == frozenset()

    def test_lonely_units(self):
        spec = GridSpec(9, 5)
        d = Distribution(spec, {(1, 2): 2, (7, 2): 2})
        assert lonely_units(d) == frozenset({Vertex(1, 2), Vertex(7, 2)})
        d2 = Distribution(spec, {(2, 2): 2, (4, 2): 2})
        assert lonely_units(d2) == frozenset()

    def test_marginal_covering_ratio(self):
        spec = GridSpec(7, 7)
        base = Distribution(spec, {(3, 3): 2})
        ext = base.with_pebbles((3, 4), 2)
        # coverage goes 5 -> 8, adding 2 pebbles
        assert marginal_covering_ratio(base, ext) == Fraction(3, 2)
        with pytest.raises(GridError):
            marginal_covering_ratio(ext, base)
        with pytest.raises(GridError):
            marginal_covering_ratio(base, base)

    def test_budget_exceeded(self):
        d = Distribution(GridSpec(4, 4), {(0, 0): 3, (0, 2): 3, (2, 0): 3})
        with pytest.raises(BudgetExceeded):
            coverage(d, node_cap=1)

    def test_interaction_engine_merges_clusters(self):
        # (1,1) needs one pebble from each pile pooled at (1,0): neither
        # pile reaches it alone
        spec = GridSpec(3, 2)
        d = Distribution(spec, {(0, 0): 3, (2, 0): 3})
        rep = coverage(d)
        assert Vertex(1, 1) in rep.reachable
        for counts in ({(0, 0): 3}, {(2, 0): 3}):
            assert Vertex(1, 1) not in coverage(Distribution(spec, counts)).reachable

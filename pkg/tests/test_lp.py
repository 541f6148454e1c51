from fractions import Fraction

import pytest

from pebblekit.grid import GridSpec, TORUS
from pebblekit.lp import (
    LpError,
    LpProblem,
    fractional_optimal_pebbling,
    solve,
    unit_excess_problem,
    verify_certificate,
)
from pebblekit.weights import fractional_solvable


class TestSolver:
    def test_simple_optimum(self):
        # min x + y s.t. x + 2y >= 4, 3x + y >= 3
        p = LpProblem(objective=(1, 1), constraints=((1, 2), (3, 1)), bounds=(4, 3))
        sol = solve(p)
        assert sol.status == "optimal"
        assert sol.objective_value == Fraction(11, 5)
        assert verify_certificate(p, sol.primal, sol.dual)

    def test_degenerate_and_redundant_rows(self):
        p = LpProblem(
            objective=(1, 2),
            constraints=((1, 0), (1, 0), (0, 1)),
            bounds=(1, 1, 0),
        )
        sol = solve(p)
        assert sol.status == "optimal"
        assert sol.objective_value == 1
        assert verify_certificate(p, sol.primal, sol.dual)

    def test_negative_bound_row_flip(self):
        # x >= -5 is vacuous for x >= 0; optimum at the other constraint
        p = LpProblem(objective=(1,), constraints=((1,), (1,)), bounds=(-5, 2))
        sol = solve(p)
        assert sol.status == "optimal" and sol.objective_value == 2

    def test_infeasible_with_farkas_ray(self):
        # x <= 1 and x >= 2 cannot hold together
        p = LpProblem(objective=(1,), constraints=((-1,), (1,)), bounds=(-1, 2))
        sol = solve(p)
        assert sol.status == "infeasible"
        y = sol.ray
        assert len(y) == 2 and all(v >= 0 for v in y)
        # y.A <= 0 with y.b > 0 certifies the contradiction
        assert sum(yi * row[0] for yi, row in zip(y, p.constraints)) <= 0
        assert sum(yi * b for yi, b in zip(y, p.bounds)) > 0

    def test_unbounded_with_ray(self):
        # min -x - y over x - y >= 0: push x = y -> -2t
        p = LpProblem(objective=(-1, -1), constraints=((1, -1),), bounds=(0,))
        sol = solve(p)
        assert sol.status == "unbounded"
        ray = sol.ray
        assert any(v != 0 for v in ray)
        assert all(v >= 0 for v in ray)
        assert sum(c * v for c, v in zip(p.objective, ray)) < 0
        assert sum(a * v for a, v in zip(p.constraints[0], ray)) >= 0

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(LpError):
            LpProblem(objective=(1, 1), constraints=((1,),), bounds=(1,))
        with pytest.raises(LpError):
            LpProblem(objective=(1,), constraints=((1,),), bounds=(1, 2))

    def test_certificate_rejects_perturbations(self):
        p = unit_excess_problem()
        sol = solve(p)
        assert verify_certificate(p, sol.primal, sol.dual)
        bumped = list(sol.primal)
        bumped[4] += Fraction(1, 10**9)
        assert not verify_certificate(p, bumped, sol.dual)
        lowered = list(sol.primal)
        lowered[4] -= Fraction(1, 10**9)
        assert not verify_certificate(p, lowered, sol.dual)


class TestUnitExcess:
    def test_optimum_is_12_25(self):
        sol = solve(unit_excess_problem())
        assert sol.status == "optimal"
        assert sol.objective_value == Fraction(12, 25)

    def test_symmetric_optimizer_feasible(self):
        p = unit_excess_problem()
        x = (Fraction(0),) * 4 + (Fraction(12, 25),) * 4
        for row, b in zip(p.constraints, p.bounds):
            assert sum(a * v for a, v in zip(row, x)) >= b
        assert sum(c * v for c, v in zip(p.objective, x)) == Fraction(12, 25)


class TestFractionalOptimal:
    def test_2x2_grid(self):
        value, witness = fractional_optimal_pebbling(GridSpec(2, 2))
        assert value == Fraction(16, 9)
        assert fractional_solvable(witness)

    @pytest.mark.parametrize(
        "n,expected",
        [
            (2, Fraction(16, 9)),
            (3, Fraction(9, 4)),
            (5, Fraction(4)),
            (7, Fraction(784, 121)),
            (9, Fraction(5184, 529)),
        ],
    )
    def test_torus_series(self, n, expected):
        value, witness = fractional_optimal_pebbling(GridSpec(n, n, TORUS))
        assert value == expected
        assert fractional_solvable(witness)
        assert witness.size == value

    def test_scale_guard(self):
        with pytest.raises(LpError):
            fractional_optimal_pebbling(GridSpec(20, 20))

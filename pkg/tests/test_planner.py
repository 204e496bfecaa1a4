import copy

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eduplan import kkt_classify, make_scenario, solve_informed, solve_informed_noncog, solve_naive
from eduplan.oracle import grid_argmax
from eduplan.planner import (INTERIOR, LOWER_CORNER, UPPER_CORNER, PLANNERS,
                             SolverError, naive_utility)

import closedform
from conftest import ref_config


def corner_config(**production_a_or_b):
    config = copy.deepcopy(ref_config())
    for key, value in production_a_or_b.items():
        side = "A" if key.endswith("A") else "B"
        config["production"][side][key] = value
    return config


class TestKKTClassify:
    def test_lower_corner(self):
        case, mu0, mu_t = kkt_classify(-0.3, -1.0)
        assert case == LOWER_CORNER
        assert mu0 == pytest.approx(0.3)
        assert mu_t == 0.0

    def test_interior(self):
        assert kkt_classify(0.5, -0.5) == (INTERIOR, 0.0, 0.0)

    def test_upper_corner(self):
        case, mu0, mu_t = kkt_classify(2.0, 0.1)
        assert case == UPPER_CORNER
        assert (mu0, mu_t) == (0.0, pytest.approx(0.1))

    def test_impossible_sign_pattern(self):
        with pytest.raises(SolverError):
            kkt_classify(-0.1, 0.1)


class TestSolveNaive:
    def test_symmetric_anchor(self, ref_scenario):
        sol = solve_naive(ref_scenario, 0.0)
        assert sol.case == INTERIOR
        assert sol.tA == pytest.approx(0.5, abs=1e-9)

    def test_k1_closed_form(self, ref_scenario):
        sol = solve_naive(ref_scenario, 1.0)
        assert sol.tA == pytest.approx(0.5625, abs=1e-9)
        assert sol.tA == pytest.approx(closedform.naive_t(ref_scenario, 1.0), abs=1e-9)

    def test_k1_grid_oracle(self, ref_scenario):
        oracle = grid_argmax(lambda t: naive_utility(ref_scenario, 1.0, t), 0.0, 1.0)
        assert abs(solve_naive(ref_scenario, 1.0).tA - oracle.x) < 1e-5

    def test_lower_corner_when_b_dominates(self):
        s = make_scenario(corner_config(aB=5.0))
        sol = solve_naive(s, 0.0)
        assert sol.case == LOWER_CORNER
        assert sol.tA == 0.0
        # mu0 = -dU/dt(0) = pB*(aB - 2 bB T) - pA*aA
        assert sol.mu0 == pytest.approx(3.2, abs=1e-12)
        assert sol.mu0 > 0

    def test_upper_corner_when_a_dominates(self):
        s = make_scenario(corner_config(aA=5.0))
        sol = solve_naive(s, 0.0)
        assert sol.case == UPPER_CORNER
        assert sol.tA == s.T
        assert sol.muT == pytest.approx(3.2, abs=1e-12)

    def test_complementary_slackness_exact(self, ref_scenario):
        for config in (ref_config(), corner_config(aB=5.0), corner_config(aA=5.0)):
            s = make_scenario(copy.deepcopy(config))
            sol = solve_naive(s, 0.0)
            assert sol.mu0 * sol.tA == 0.0
            assert sol.muT * (s.T - sol.tA) == 0.0

    def test_utility_matches_direct_evaluation(self, ref_scenario):
        sol = solve_naive(ref_scenario, 1.0)
        assert sol.utility == pytest.approx(
            naive_utility(ref_scenario, 1.0, sol.tA), abs=1e-12)

    def test_negative_k_rejected(self, ref_scenario):
        with pytest.raises(ValueError, match="K must be >= 0"):
            solve_naive(ref_scenario, -0.5)


class TestSolveInformed:
    def test_anchoring_identity(self, ref_scenario):
        naive = solve_naive(ref_scenario, ref_scenario.K0)
        informed = solve_informed(ref_scenario, ref_scenario.K0)
        assert abs(naive.tA - informed.tA) <= 1e-8

    def test_k1_closed_form(self, ref_scenario):
        sol = solve_informed(ref_scenario, 1.0)
        assert sol.case == INTERIOR
        assert sol.tA == pytest.approx(closedform.informed_t(ref_scenario, 1.0), abs=1e-9)
        assert sol.tA == pytest.approx(0.1115, abs=5e-4)

    def test_direction_of_comparative_static(self, ref_scenario):
        assert solve_informed(ref_scenario, 2.0).tA < solve_informed(ref_scenario, 1.0).tA

    def test_foc_residual_within_tolerance_when_interior(self, ref_scenario):
        for k in (0.0, 0.5, 1.0, 1.5):
            sol = solve_informed(ref_scenario, k)
            assert sol.focResidual <= 1e-10


class TestSolveInformedNoncog:
    def test_shifts_below_naive_at_anchor(self, ref_scenario):
        sol = solve_informed_noncog(ref_scenario, 0.0)
        assert sol.tA < 0.5
        assert sol.tA == pytest.approx(closedform.noncog_t(ref_scenario, 0.0), abs=1e-9)
        assert sol.skills.C == pytest.approx(
            ref_scenario.noncog.value(sol.tA, 1.0 - sol.tA, 0.0), abs=1e-15)

    def test_degenerates_to_informed_as_gamma_vanishes(self):
        config = copy.deepcopy(ref_config())
        config["gamma"] = 1e-12
        s = make_scenario(config)
        assert abs(solve_informed_noncog(s, 1.0).tA - solve_informed(s, 1.0).tA) < 1e-6

    def test_strictly_decreasing_in_k(self, ref_scenario):
        values = [solve_informed_noncog(ref_scenario, k).tA for k in (0.0, 0.5, 1.0)]
        assert values[0] > values[1] > values[2]


class TestOracleEquivalence:
    @pytest.mark.parametrize("planner", ["naive", "informed", "noncog"])
    @pytest.mark.parametrize("k", [0.0, 0.6, 1.3, 2.0])
    def test_solver_matches_grid_argmax(self, ref_scenario, planner, k):
        utility, _ = PLANNERS[planner]
        solver = {"naive": solve_naive, "informed": solve_informed,
                  "noncog": solve_informed_noncog}[planner]
        n = 200001
        oracle = grid_argmax(lambda t: utility(ref_scenario, k, t), 0.0, 1.0, n)
        spacing = 1.0 / (n - 1)
        assert abs(solver(ref_scenario, k).tA - oracle.x) <= spacing + 1e-6

    def test_solution_dominates_grid(self, ref_scenario):
        sol = solve_informed(ref_scenario, 1.0)
        ts = np.linspace(0.0, 1.0, 200001)
        from eduplan.planner import informed_utility
        assert sol.utility >= informed_utility(ref_scenario, 1.0, ts).max() - 1e-12


@settings(max_examples=30, deadline=None)
@given(
    k=st.floats(min_value=0.0, max_value=2.0),
    b_a=st.floats(min_value=0.25, max_value=0.6),
    eta_a=st.floats(min_value=0.05, max_value=0.3),
    delta_a=st.floats(min_value=0.8, max_value=3.0),
)
def test_solver_oracle_agreement_property(k, b_a, eta_a, delta_a):
    config = copy.deepcopy(ref_config())
    config["production"]["A"]["bA"] = b_a
    config["production"]["A"]["etaA"] = eta_a
    config["wages"]["A"]["deltaA"] = delta_a
    s = make_scenario(config)
    for planner, solver in (("naive", solve_naive), ("informed", solve_informed)):
        utility = PLANNERS[planner][0]
        sol = solver(s, k)
        n = 50001
        oracle = grid_argmax(lambda t: utility(s, k, t), 0.0, s.T, n)
        assert abs(sol.tA - oracle.x) <= s.T / (n - 1) + 1e-6
        assert sol.mu0 * sol.tA == 0.0
        assert sol.muT * (s.T - sol.tA) == 0.0

import numpy as np
import pytest

from eduplan.economy import informed_cross_partial, naive_cross_partial
from eduplan.oracle import (NOT_APPLICABLE, VERIFIED, check_proposition,
                            fd_cross_partial, fd_cross_sign, grid_argmax)
from eduplan.planner import informed_utility, naive_utility


class TestGridArgmax:
    def test_known_parabola(self):
        result = grid_argmax(lambda x: -(x - 0.3) ** 2, 0.0, 1.0, 100001)
        assert abs(result.x - 0.3) <= 1e-5

    def test_constant_ties_break_to_smallest(self):
        result = grid_argmax(lambda x: np.zeros_like(x), 0.0, 1.0, 101)
        assert result.x == 0.0

    def test_naive_objective(self, ref_scenario):
        result = grid_argmax(lambda t: naive_utility(ref_scenario, 1.0, t),
                             0.0, 1.0, 200001)
        assert abs(result.x - 0.5625) <= 1e-5

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            grid_argmax(lambda x: np.where(x > 0.5, np.inf, x), 0.0, 1.0, 11)

    def test_scalar_only_functions_supported(self):
        result = grid_argmax(lambda x: -abs(float(x) - 0.25), 0.0, 1.0, 101)
        assert result.x == pytest.approx(0.25)

    def test_bounds_validation(self):
        with pytest.raises(ValueError, match="n must be >= 2"):
            grid_argmax(lambda x: x, 0.0, 1.0, 1)
        with pytest.raises(ValueError, match="lo < hi"):
            grid_argmax(lambda x: x, 1.0, 0.0, 11)


class TestFdCrossPartial:
    def test_bilinear_exact(self):
        est = fd_cross_partial(lambda t, k: t * k, 0.37, 0.81, 1e-4)
        assert est == pytest.approx(1.0, abs=1e-8)

    def test_naive_objective_matches_analytic(self, ref_scenario):
        est = fd_cross_partial(lambda t, k: naive_utility(ref_scenario, k, t),
                               0.5, 0.5, 1e-4)
        assert est == pytest.approx(0.1, abs=1e-6)
        assert est == pytest.approx(float(naive_cross_partial(ref_scenario, 0.5, 0.5)),
                                    abs=1e-6)

    def test_informed_objective_negative(self, ref_scenario):
        est = fd_cross_partial(lambda t, k: informed_utility(ref_scenario, k, t),
                               0.5, 0.5, 1e-4)
        assert est < 0
        assert est == pytest.approx(
            float(informed_cross_partial(ref_scenario, 0.5, 0.5)), abs=1e-6)

    def test_second_order_convergence(self, ref_scenario):
        target = float(informed_cross_partial(ref_scenario, 0.5, 0.5))

        def err(h):
            return abs(fd_cross_partial(
                lambda t, k: informed_utility(ref_scenario, k, t), 0.5, 0.5, h) - target)

        ratio = err(5e-4) / err(1e-3)
        assert 0.15 <= ratio <= 0.35

    def test_sign_declaration_threshold(self, ref_scenario):
        assert fd_cross_sign(lambda t, k: naive_utility(ref_scenario, k, t),
                             0.5, 0.5) == 1
        assert fd_cross_sign(lambda t, k: informed_utility(ref_scenario, k, t),
                             0.5, 0.5) == -1
        assert fd_cross_sign(lambda t, k: t + k, 0.5, 0.5) == 0


class TestCheckProposition:
    def test_p1_verified_with_corner_note(self, ref_scenario):
        report = check_proposition(ref_scenario, "P1")
        assert report.status == VERIFIED
        assert report.cornerNote is not None  # informed path corners inside [0, 2]

    def test_p1_not_applicable_on_violator(self, violator_scenario):
        report = check_proposition(violator_scenario, "P1")
        assert report.status == NOT_APPLICABLE
        assert "A7" in report.evidence.description

    def test_p2_verified(self, ref_scenario):
        report = check_proposition(ref_scenario, "P2",
                                   k_grid=np.linspace(0.0, 2.0, 21))
        assert report.status == VERIFIED

    def test_p3_verified_from_scenario(self, full_scenario):
        report = check_proposition(full_scenario, "P3")
        assert report.status == VERIFIED

    def test_p3_not_applicable_without_adoption(self, ref_scenario):
        report = check_proposition(ref_scenario, "P3")
        assert report.status == NOT_APPLICABLE

    def test_p3_not_applicable_when_overlap_fails(self, full_scenario):
        # far out, the suppressed wage kills the planner's benefit overlap
        report = check_proposition(full_scenario, "P3", k=3.0)
        assert report.status == NOT_APPLICABLE
        assert "interior cost set" in report.evidence.description

    def test_p4_reference_no_jump(self, full_scenario):
        report = check_proposition(full_scenario, "P4")
        assert report.status == VERIFIED
        assert "no jump" in report.evidence.description

    def test_p4_engineered_jump_evidence(self, engineered_tiers_scenario):
        report = check_proposition(engineered_tiers_scenario, "P4")
        assert report.status == VERIFIED
        assert "discontinuity" in report.evidence.description
        assert "K" in report.evidence.point

    def test_deterministic(self, ref_scenario):
        a = check_proposition(ref_scenario, "P1", k_grid=np.linspace(0, 1, 11))
        b = check_proposition(ref_scenario, "P1", k_grid=np.linspace(0, 1, 11))
        assert a == b

    def test_unknown_proposition(self, ref_scenario):
        with pytest.raises(ValueError, match="unknown proposition"):
            check_proposition(ref_scenario, "P9")

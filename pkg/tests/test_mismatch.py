import copy

import numpy as np
import pytest

from eduplan import (AuditFailure, make_scenario, mismatch_curve,
                     noncog_gap_curve, welfare_decomposition)
from eduplan.mismatch import EPS_MONO
from eduplan.planner import INTERIOR

import closedform
from conftest import ref_config

K_GRID = np.linspace(0.0, 2.0, 41)


class TestMismatchCurve:
    def test_anchored_at_zero(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, K_GRID)
        assert abs(curve.mismatch[0]) <= 1e-8

    def test_strictly_increasing_along_grid(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, K_GRID)
        assert np.all(np.diff(curve.mismatch) > EPS_MONO)
        assert curve.verdict.strictlyIncreasing
        assert curve.verdict.firstViolation is None

    def test_mismatch_bounded_by_one(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, K_GRID)
        assert np.all(np.abs(curve.mismatch) <= 1.0)

    def test_k1_value_from_solver_examples(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, K_GRID)
        i = np.argmin(np.abs(curve.KGrid - 1.0))
        expected = (closedform.naive_t(ref_scenario, 1.0)
                    - closedform.informed_t(ref_scenario, 1.0)) / ref_scenario.T
        assert curve.mismatch[i] == pytest.approx(expected, abs=1e-9)
        assert curve.mismatch[i] == pytest.approx(0.4510, abs=1e-4)

    def test_allocation_monotonicity(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, K_GRID)
        assert np.all(np.diff(curve.tNaive) > EPS_MONO)
        assert np.all(np.diff(curve.tInf) <= EPS_MONO)
        interior = [f[1] == INTERIOR for f in curve.cornerFlags]
        strict = [d for d, a, b in zip(np.diff(curve.tInf), interior, interior[1:])
                  if a and b][1:]  # skip the anchored first step
        assert all(d < -EPS_MONO for d in strict)

    def test_informed_corner_reached_and_flagged(self, ref_scenario):
        # the informed allocation hits the lower bound inside [0, 2]
        curve = mismatch_curve(ref_scenario, K_GRID)
        assert curve.cornerFlags[-1][1] == "lower-corner"
        assert curve.tInf[-1] == 0.0

    def test_anchoring_at_positive_k0(self):
        config = copy.deepcopy(ref_config())
        config["K0"] = 0.5
        s = make_scenario(config)
        curve = mismatch_curve(s, np.linspace(0.5, 2.0, 16))
        assert abs(curve.mismatch[0]) <= 1e-8
        assert np.all(np.diff(curve.mismatch) > EPS_MONO)

    def test_degenerate_single_point_grid(self, ref_scenario):
        curve = mismatch_curve(ref_scenario, [ref_scenario.K0])
        assert curve.mismatch.shape == (1,)
        assert abs(curve.mismatch[0]) <= 1e-8
        assert curve.verdict.strictlyIncreasing

    def test_grid_refinement_never_flips_verdict(self, ref_scenario):
        coarse = mismatch_curve(ref_scenario, np.linspace(0.0, 2.0, 21))
        fine = mismatch_curve(ref_scenario, K_GRID)
        assert coarse.verdict.strictlyIncreasing
        assert fine.verdict.strictlyIncreasing

    def test_refuses_dominance_violator(self, violator_scenario):
        with pytest.raises(AuditFailure) as err:
            mismatch_curve(violator_scenario, K_GRID)
        assert err.value.assumption == "A7"

    def test_grid_validation(self, ref_scenario):
        with pytest.raises(ValueError, match="strictly increasing"):
            mismatch_curve(ref_scenario, [0.0, 0.0, 0.1])
        with pytest.raises(ValueError, match="K grid must start"):
            make_k0 = copy.deepcopy(ref_config())
            make_k0["K0"] = 1.0
            mismatch_curve(make_scenario(make_k0), [0.0, 1.5])


class TestNoncogGapCurve:
    def test_under_provision_at_anchor(self, ref_scenario):
        curve = noncog_gap_curve(ref_scenario, K_GRID)
        assert curve.gap[0] > 0

    def test_gap_strictly_increasing(self, ref_scenario):
        curve = noncog_gap_curve(ref_scenario, np.linspace(0.0, 2.0, 21))
        assert np.all(np.diff(curve.gap) > EPS_MONO)
        assert curve.verdict.strictlyIncreasing

    def test_gap_vanishes_with_gamma(self):
        config = copy.deepcopy(ref_config())
        config["gamma"] = 1e-12
        s = make_scenario(config)
        curve = noncog_gap_curve(s, [0.0])
        assert abs(curve.gap[0]) < 1e-6

    def test_refuses_on_audit_failure(self, violator_scenario):
        with pytest.raises(AuditFailure):
            noncog_gap_curve(violator_scenario, K_GRID)


class TestWelfareDecomposition:
    def test_zero_step_is_all_zero(self, ref_scenario):
        report = welfare_decomposition(ref_scenario, 0.5, 0.0)
        assert (report.teachingGain, report.substitutionLoss,
                report.noncogExternality, report.residual) == (0, 0, 0, 0)

    def test_negative_step_rejected(self, ref_scenario):
        with pytest.raises(ValueError, match="dK must be >= 0"):
            welfare_decomposition(ref_scenario, 0.5, -1e-3)

    def test_residual_is_second_order(self, ref_scenario):
        report = welfare_decomposition(ref_scenario, 0.5, 1e-3)
        assert abs(report.residual) <= 1e-4

    def test_residual_scales_quadratically(self, ref_scenario):
        coarse = welfare_decomposition(ref_scenario, 0.5, 1e-3)
        fine = welfare_decomposition(ref_scenario, 0.5, 5e-4)
        assert abs(coarse.residual) > 1e-10
        ratio = abs(fine.residual) / abs(coarse.residual)
        assert 0.15 <= ratio <= 0.35

    def test_substitution_loss_negative_on_range(self, ref_scenario):
        for k in np.linspace(0.0, 2.0, 21):
            report = welfare_decomposition(ref_scenario, k, 1e-3)
            assert report.substitutionLoss < 0

    def test_channel_signs_at_reference_point(self, ref_scenario):
        report = welfare_decomposition(ref_scenario, 0.5, 1e-3)
        assert report.teachingGain > 0
        assert report.noncogExternality < 0

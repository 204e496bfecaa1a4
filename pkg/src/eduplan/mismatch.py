"""Mismatch and unpriced-skill gap curves over capital grids, plus the welfare split.

Curves refuse to run on scenarios that fail the assumption audit; a failing
assumption is reported by id rather than silently producing meaningless
monotonicity verdicts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .economy import Scenario, audit_assumptions
from .planner import (INTERIOR, noncog_output, solve_informed,
                      solve_informed_noncog, solve_naive)

# Consecutive differences must exceed this to count as strictly monotone.
EPS_MONO = 1e-9

# t-axis resolution for the covering audit grid.
AUDIT_T_POINTS = 41

BASELINE_AUDIT = ("A1", "A2", "A4", "A5", "A7")
NONCOG_AUDIT = BASELINE_AUDIT + ("A8",)


@dataclass(frozen=True)
class CurveVerdict:
    strictlyIncreasing: bool
    firstViolation: Optional[int]


@dataclass(frozen=True)
class MismatchCurve:
    KGrid: np.ndarray
    tNaive: np.ndarray
    tInf: np.ndarray
    mismatch: np.ndarray
    cornerFlags: tuple  # per-K (case_naive, case_informed)
    verdict: CurveVerdict


@dataclass(frozen=True)
class GapCurve:
    KGrid: np.ndarray
    CNaive: np.ndarray
    CInf: np.ndarray
    gap: np.ndarray
    cornerFlags: tuple
    verdict: CurveVerdict


@dataclass(frozen=True)
class WelfareReport:
    K: float
    dK: float
    teachingGain: float
    substitutionLoss: float
    noncogExternality: float
    residual: float


def _validate_k_grid(s: Scenario, k_grid) -> np.ndarray:
    k = np.atleast_1d(np.asarray(k_grid, dtype=float))
    if k.size == 0:
        raise ValueError("K grid must be non-empty")
    if k.size > 1 and np.any(np.diff(k) <= 0):
        raise ValueError("K grid must be strictly increasing")
    if k[0] < s.K0 - 1e-12:
        raise ValueError("K grid must start at or above K0")
    return k


def _run_audit(s: Scenario, k: np.ndarray, required) -> None:
    t_grid = np.linspace(0.0, s.T, AUDIT_T_POINTS)
    audit_assumptions(s, t_grid, k).require(required)


def _strict_increase_verdict(values: np.ndarray, corner_flags) -> CurveVerdict:
    """Strict-increase verdict over the interior-regime prefix of the grid.

    Once either solver leaves the interior, only weak monotonicity is
    asserted, so diffs beyond the first corner are excluded from the verdict.
    """
    prefix = len(values)
    for i, flags in enumerate(corner_flags):
        if any(case != INTERIOR for case in flags):
            prefix = i
            break
    diffs = np.diff(values[:max(prefix, 1)])
    bad = np.nonzero(diffs <= EPS_MONO)[0]
    if bad.size:
        return CurveVerdict(strictlyIncreasing=False, firstViolation=int(bad[0]))
    return CurveVerdict(strictlyIncreasing=True, firstViolation=None)


def mismatch_curve(s: Scenario, k_grid) -> MismatchCurve:
    """Naive-minus-informed allocation gap, normalized by T, along a K grid."""
    k = _validate_k_grid(s, k_grid)
    _run_audit(s, k, BASELINE_AUDIT)
    naive = [solve_naive(s, kv) for kv in k]
    informed = [solve_informed(s, kv) for kv in k]
    t_naive = np.array([sol.tA for sol in naive])
    t_inf = np.array([sol.tA for sol in informed])
    mism = (t_naive - t_inf) / s.T
    flags = tuple((a.case, b.case) for a, b in zip(naive, informed))
    return MismatchCurve(KGrid=k, tNaive=t_naive, tInf=t_inf, mismatch=mism,
                         cornerFlags=flags,
                         verdict=_strict_increase_verdict(mism, flags))


def noncog_gap_curve(s: Scenario, k_grid) -> GapCurve:
    """Unpriced-skill gap between the noncog-aware and naive planners."""
    k = _validate_k_grid(s, k_grid)
    _run_audit(s, k, NONCOG_AUDIT)
    naive = [solve_naive(s, kv) for kv in k]
    aware = [solve_informed_noncog(s, kv) for kv in k]
    c_naive = np.array([sol.skills.C for sol in naive])
    c_inf = np.array([sol.skills.C for sol in aware])
    gap = c_inf - c_naive
    flags = tuple((a.case, b.case) for a, b in zip(naive, aware))
    return GapCurve(KGrid=k, CNaive=c_naive, CInf=c_inf, gap=gap,
                    cornerFlags=flags,
                    verdict=_strict_increase_verdict(gap, flags))


def welfare_decomposition(s: Scenario, k: float, dk: float) -> WelfareReport:
    """First-order welfare split over [K, K+dK] along the naive policy path.

    teachingGain freezes wages at K while skills move; substitutionLoss
    freezes skills while wages move; the unpriced-skill channel is taken
    exactly. The residual collects the remaining cross terms and shrinks
    quadratically in dK.
    """
    if dk < 0:
        raise ValueError(f"dK must be >= 0, got {dk}")
    if k < s.K0:
        raise ValueError("K must be at or above K0")
    if dk == 0:
        return WelfareReport(K=k, dK=0.0, teachingGain=0.0, substitutionLoss=0.0,
                             noncogExternality=0.0, residual=0.0)

    k2 = k + dk
    t1, t2 = solve_naive(s, k).tA, solve_naive(s, k2).tA
    ke1, ke2 = s.g(k), s.g(k2)

    fa1, fb1 = s.prodA.value(t1, ke1), s.prodB.value(s.T - t1, ke1)
    fa2, fb2 = s.prodA.value(t2, ke2), s.prodB.value(s.T - t2, ke2)
    wa1, wb1 = s.wageA.value(k), s.wageB.value(k)
    wa2, wb2 = s.wageA.value(k2), s.wageB.value(k2)
    c1, c2 = noncog_output(s, t1, k), noncog_output(s, t2, k2)

    teaching = wa1 * (fa2 - fa1) + wb1 * (fb2 - fb1)
    substitution = (wa2 - wa1) * fa1 + (wb2 - wb1) * fb1
    externality = s.gamma * (c2 - c1)

    total = (wa2 * fa2 + wb2 * fb2 + s.gamma * c2) - (wa1 * fa1 + wb1 * fb1 + s.gamma * c1)
    residual = total - (teaching + substitution + externality)
    return WelfareReport(K=k, dK=dk, teachingGain=float(teaching),
                         substitutionLoss=float(substitution),
                         noncogExternality=float(externality),
                         residual=float(residual))

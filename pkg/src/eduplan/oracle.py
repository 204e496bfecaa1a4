"""Independent verification primitives and end-to-end proposition replays.

Everything here deliberately avoids the bisection solvers: maximizers come
from dense grid argmax and derivatives from central differences, so agreement
between this module and the solver path is evidence, not circularity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import adoption as ad
from . import tiers as ti
from .economy import AuditFailure, Scenario, audit_assumptions
from .mismatch import AUDIT_T_POINTS, BASELINE_AUDIT, EPS_MONO, NONCOG_AUDIT
from .planner import (INTERIOR, PLANNERS, solve_informed,
                      solve_informed_noncog, solve_naive)

DEFAULT_GRID_N = 200001

# Cross-partial sign is declared only beyond this magnitude.
SIGN_EPS = 1e-7

VERIFIED = "verified"
VIOLATED = "violated"
NOT_APPLICABLE = "not-applicable"


class GridMax(NamedTuple):
    x: float
    value: float


@dataclass(frozen=True)
class Evidence:
    point: dict
    margin: float
    description: str


@dataclass(frozen=True)
class PropositionReport:
    proposition: str
    status: str
    evidence: Optional[Evidence]
    cornerNote: Optional[str]

    def to_dict(self) -> dict:
        return {
            "proposition": self.proposition,
            "status": self.status,
            "evidence": None if self.evidence is None else {
                "point": self.evidence.point,
                "margin": self.evidence.margin,
                "description": self.evidence.description,
            },
            "cornerNote": self.cornerNote,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def grid_argmax(f, lo: float, hi: float, n: int = DEFAULT_GRID_N) -> GridMax:
    """Argmax of f over an n-point grid on [lo, hi]; ties break to smallest x."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if not lo < hi:
        raise ValueError(f"requires lo < hi, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, n)
    try:
        vals = np.asarray(f(xs), dtype=float)
        if vals.shape != xs.shape:
            raise TypeError("objective does not vectorize")
    except TypeError:
        vals = np.array([float(f(x)) for x in xs])
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise ValueError(f"objective is non-finite at x={bad}")
    i = int(np.argmax(vals))  # first maximum -> smallest x
    return GridMax(x=float(xs[i]), value=float(vals[i]))


def default_fd_step(t: float, k: float) -> float:
    return 1e-4 * max(1.0, abs(t), abs(k))


def fd_cross_partial(f, t: float, k: float, h: Optional[float] = None) -> float:
    """Central four-point estimate of d2F/(dt dK)."""
    if h is None:
        h = default_fd_step(t, k)
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    est = (f(t + h, k + h) - f(t + h, k - h)
           - f(t - h, k + h) + f(t - h, k - h)) / (4.0 * h * h)
    est = float(est)
    if not np.isfinite(est):
        raise ValueError("cross-partial estimate is non-finite (domain violation?)")
    return est


def fd_cross_sign(f, t: float, k: float, h: Optional[float] = None) -> int:
    """Sign of the estimated cross-partial; 0 when below the noise threshold."""
    est = fd_cross_partial(f, t, k, h)
    if abs(est) <= SIGN_EPS:
        return 0
    return 1 if est > 0 else -1


def _grid_spacing(lo: float, hi: float, n: int) -> float:
    return (hi - lo) / (n - 1)


def _not_applicable(which: str, exc: AuditFailure) -> PropositionReport:
    return PropositionReport(
        proposition=which, status=NOT_APPLICABLE,
        evidence=Evidence(point={}, margin=0.0,
                          description=f"audit did not pass {exc.assumption}"),
        cornerNote=None)


def _violated(which, point, margin, description, corner_note=None):
    return PropositionReport(proposition=which, status=VIOLATED,
                             evidence=Evidence(point=point, margin=float(margin),
                                               description=description),
                             cornerNote=corner_note)


def _replay_allocation_curves(s, k_grid, planner: str, n: int):
    """Grid-argmax and solver allocations for one planner along a K grid."""
    utility = PLANNERS[planner][0]
    solver = {"naive": solve_naive, "informed": solve_informed,
              "noncog": solve_informed_noncog}[planner]
    oracle_t, solver_t, cases = [], [], []
    for k in k_grid:
        oracle_t.append(grid_argmax(lambda t: utility(s, k, t), 0.0, s.T, n).x)
        sol = solver(s, k)
        solver_t.append(sol.tA)
        cases.append(sol.case)
    return np.array(oracle_t), np.array(solver_t), cases


def _solver_agreement(which, k_grid, oracle_t, solver_t, tol):
    gaps = np.abs(oracle_t - solver_t)
    i = int(np.argmax(gaps))
    if gaps[i] > tol:
        return _violated(which, {"K": float(k_grid[i])}, gaps[i],
                         "solver and grid-argmax paths disagree")
    return None


def check_proposition(s: Scenario, which: str, *, k_grid=None, c_grid=None,
                      ta: Optional[float] = None, k: Optional[float] = None,
                      n: int = DEFAULT_GRID_N) -> PropositionReport:
    """Replay one of the four structural claims using oracle primitives only.

    Disagreement between the oracle and solver paths is itself a violation.
    Scenarios that fail the relevant audit yield a not-applicable report
    citing the assumption.
    """
    if which == "P1":
        return _check_p1(s, k_grid, n)
    if which == "P2":
        return _check_p2(s, k_grid, n)
    if which == "P3":
        return _check_p3(s, c_grid, ta, k)
    if which == "P4":
        return _check_p4(s, k_grid)
    raise ValueError(f"unknown proposition {which!r}")


def _default_k_grid(s: Scenario):
    return s.K0 + np.linspace(0.0, 2.0, 41)


def _check_p1(s, k_grid, n) -> PropositionReport:
    k_grid = _default_k_grid(s) if k_grid is None else np.asarray(k_grid, float)
    t_axis = np.linspace(0.0, s.T, AUDIT_T_POINTS)
    try:
        audit_assumptions(s, t_axis, k_grid).require(BASELINE_AUDIT)
    except AuditFailure as exc:
        return _not_applicable("P1", exc)

    tol = _grid_spacing(0.0, s.T, n) + 1e-6
    naive_o, naive_s, naive_cases = _replay_allocation_curves(s, k_grid, "naive", n)
    inf_o, inf_s, inf_cases = _replay_allocation_curves(s, k_grid, "informed", n)
    for disagreement in (_solver_agreement("P1", k_grid, naive_o, naive_s, tol),
                         _solver_agreement("P1", k_grid, inf_o, inf_s, tol)):
        if disagreement is not None:
            return disagreement

    corner = None
    for i, (a, b) in enumerate(zip(naive_cases, inf_cases)):
        if a != INTERIOR or b != INTERIOR:
            corner = i
            break
    corner_note = None
    if corner is not None:
        corner_note = (f"weak-monotonicity regime from K={k_grid[corner]:.6g} "
                       f"(first corner solution)")

    mismatch = (naive_s - inf_s) / s.T
    diffs = np.diff(mismatch)
    # Strict increase is asserted while the naive path is interior; once the
    # naive allocation itself corners, only weak monotonicity remains.
    for i, d in enumerate(diffs):
        naive_interior = naive_cases[i] == INTERIOR and naive_cases[i + 1] == INTERIOR
        if naive_interior and d <= EPS_MONO:
            return _violated("P1", {"K": float(k_grid[i + 1])}, d,
                             "mismatch not strictly increasing", corner_note)
        if not naive_interior and d < -EPS_MONO:
            return _violated("P1", {"K": float(k_grid[i + 1])}, d,
                             "mismatch decreased in the corner regime", corner_note)
    margin = float(diffs.min()) if diffs.size else 0.0
    worst = {"K": float(k_grid[int(np.argmin(diffs)) + 1])} if diffs.size else {}
    return PropositionReport("P1", VERIFIED,
                             Evidence(worst, margin, "smallest mismatch increment"),
                             corner_note)


def _check_p2(s, k_grid, n) -> PropositionReport:
    k_grid = _default_k_grid(s) if k_grid is None else np.asarray(k_grid, float)
    t_axis = np.linspace(0.0, s.T, AUDIT_T_POINTS)
    try:
        audit_assumptions(s, t_axis, k_grid).require(NONCOG_AUDIT)
    except AuditFailure as exc:
        return _not_applicable("P2", exc)

    tol = _grid_spacing(0.0, s.T, n) + 1e-6
    naive_o, naive_s, naive_cases = _replay_allocation_curves(s, k_grid, "naive", n)
    aware_o, aware_s, aware_cases = _replay_allocation_curves(s, k_grid, "noncog", n)
    for disagreement in (_solver_agreement("P2", k_grid, naive_o, naive_s, tol),
                         _solver_agreement("P2", k_grid, aware_o, aware_s, tol)):
        if disagreement is not None:
            return disagreement

    from .planner import noncog_output
    gap = np.array([noncog_output(s, tb, kv) - noncog_output(s, ta_, kv)
                    for ta_, tb, kv in zip(naive_s, aware_s, k_grid)])
    if abs(k_grid[0] - s.K0) < 1e-12 and not gap[0] > 0:
        return _violated("P2", {"K": float(k_grid[0])}, gap[0],
                         "no under-provision at the anchor")

    corner_idx = None
    for i, (a, b) in enumerate(zip(naive_cases, aware_cases)):
        if a != INTERIOR or b != INTERIOR:
            corner_idx = i
            break
    corner_note = (None if corner_idx is None else
                   f"weak-monotonicity regime from K={k_grid[corner_idx]:.6g} "
                   f"(first corner solution)")

    diffs = np.diff(gap)
    for i, d in enumerate(diffs):
        interior = (naive_cases[i] == INTERIOR and naive_cases[i + 1] == INTERIOR
                    and aware_cases[i] == INTERIOR and aware_cases[i + 1] == INTERIOR)
        if interior and d <= EPS_MONO:
            return _violated("P2", {"K": float(k_grid[i + 1])}, d,
                             "gap not strictly increasing", corner_note)
        if not interior and d < -EPS_MONO:
            return _violated("P2", {"K": float(k_grid[i + 1])}, d,
                             "gap decreased in the corner regime", corner_note)
    margin = float(diffs.min()) if diffs.size else float(gap[0])
    worst = {"K": float(k_grid[int(np.argmin(diffs)) + 1])} if diffs.size else {}
    return PropositionReport("P2", VERIFIED,
                             Evidence(worst, margin, "smallest gap increment"),
                             corner_note)


def _check_p3(s, c_grid, ta, k) -> PropositionReport:
    if s.adoption is None:
        return PropositionReport(
            "P3", NOT_APPLICABLE,
            Evidence({}, 0.0, "scenario has no adoption table"), None)
    ta = s.T / 2.0 if ta is None else ta
    k = s.K0 + 0.25 if k is None else k
    problem = ad.intensity_problem_from_scenario(s, ta, k)
    interval = ad.interior_cost_set(problem)
    if not interval.nonEmpty:
        return PropositionReport(
            "P3", NOT_APPLICABLE,
            Evidence({"lo": interval.lo, "hi": interval.hi}, interval.lo - interval.hi,
                     "interior cost set is empty (overlap condition fails)"), None)
    if c_grid is None:
        width = interval.hi - interval.lo
        c_grid = np.linspace(interval.hi - 0.05 * width,
                             interval.lo + 0.05 * width, 11)
    c_grid = np.asarray(c_grid, dtype=float)

    # Oracle path: dense argmax of the net benefit, step 1e-6.
    n_alpha = 1000001
    tol = _grid_spacing(0.0, 1.0, n_alpha) + 1e-6
    school_o, planner_o = [], []
    for c in c_grid:
        school_o.append(grid_argmax(
            lambda a: ad.net_benefit(problem, ad.SCHOOL, a, c), 0.0, 1.0, n_alpha).x)
        planner_o.append(grid_argmax(
            lambda a: ad.net_benefit(problem, ad.PLANNER, a, c), 0.0, 1.0, n_alpha).x)
    school_o, planner_o = np.array(school_o), np.array(planner_o)
    curve = ad.adoption_mismatch_curve(problem, c_grid)
    for name, oracle_a, solver_a in (("school", school_o, curve.alphaSchool),
                                     ("planner", planner_o, curve.alphaPlanner)):
        gaps = np.abs(oracle_a - solver_a)
        i = int(np.argmax(gaps))
        if gaps[i] > tol:
            return _violated("P3", {"c": float(c_grid[i]), "agent": name}, gaps[i],
                             "closed form and grid argmax disagree")

    if not np.all(curve.gapAlpha > 0):
        i = int(np.argmin(curve.gapAlpha))
        return _violated("P3", {"c": float(c_grid[i])}, curve.gapAlpha[i],
                         "school intensity does not exceed the planner's")
    diffs = np.diff(curve.gapAlpha)  # along falling cost
    widening = curve.wideningPredicted
    if widening and diffs.size and not np.all(diffs > EPS_MONO):
        i = int(np.argmin(diffs))
        return _violated("P3", {"c": float(c_grid[i + 1])}, diffs[i],
                         "predicted widening gap failed to widen")
    if not widening and diffs.size and not np.all(diffs <= EPS_MONO):
        i = int(np.argmax(diffs))
        return _violated("P3", {"c": float(c_grid[i + 1])}, diffs[i],
                         "gap widened although widening was not predicted")
    if not np.all(curve.gapC > 0):
        i = int(np.argmin(curve.gapC))
        return _violated("P3", {"c": float(c_grid[i])}, curve.gapC[i],
                         "unpriced-skill gap not positive")
    margin = float(curve.gapAlpha.min())
    return PropositionReport(
        "P3", VERIFIED,
        Evidence({"c": float(c_grid[int(np.argmin(curve.gapAlpha))])}, margin,
                 f"smallest intensity gap (widening predicted: {widening})"), None)


def _check_p4(s, k_grid) -> PropositionReport:
    k_grid = (s.K0 + np.linspace(0.0, 1.0, 21) if k_grid is None
              else np.asarray(k_grid, float))
    t_axis = np.linspace(0.0, s.T, AUDIT_T_POINTS)
    try:
        audit_assumptions(s, t_axis, k_grid).require(ti.TIER_AUDIT)
    except AuditFailure as exc:
        return _not_applicable("P4", exc)

    curve = ti.tiered_mismatch_curve(s, k_grid)
    # Brute-force dominance of the chosen barbell candidate, 100001 points.
    for i, k in enumerate(k_grid):
        best = grid_argmax(lambda t: ti.tiered_utility(s, k, t), 0.0, s.T, 100001)
        chosen = float(ti.tiered_utility(s, k, curve.tInf[i]))
        if best.value > chosen + 1e-8:
            return _violated("P4", {"K": float(k), "tA": best.x},
                             best.value - chosen,
                             "brute force beats the barbell candidate")

    jumps = np.nonzero(curve.jumpFlag)[0]
    segments = np.split(np.arange(k_grid.size), jumps) if jumps.size else [np.arange(k_grid.size)]
    for seg in segments:
        if seg.size < 2:
            continue
        seg_diffs = np.diff(curve.mismatch[seg])
        if not np.all(seg_diffs > EPS_MONO):
            i = int(np.argmin(seg_diffs))
            return _violated("P4", {"K": float(k_grid[seg[i + 1]])}, seg_diffs[i],
                             "mismatch not strictly increasing within a "
                             "constant-choice segment")
    if jumps.size:
        j = int(jumps[0])
        return PropositionReport(
            "P4", VERIFIED,
            Evidence({"K": float(k_grid[j])}, float(curve.mismatch[j] - curve.mismatch[j - 1]),
                     f"{jumps.size} discontinuity(ies); first jump at this K"), None)
    margin = float(np.diff(curve.mismatch).min()) if k_grid.size > 1 else 0.0
    return PropositionReport(
        "P4", VERIFIED,
        Evidence({}, margin, "no jump; smallest mismatch increment"), None)

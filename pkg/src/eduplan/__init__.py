"""Planner time-allocation models under shifting technology capital.

Library layout:

* :mod:`eduplan.economy` — parametric scenario families and assumption audits
* :mod:`eduplan.planner` — KKT-classified scalar solvers for the planner problems
* :mod:`eduplan.mismatch` — mismatch/gap curves and the welfare split
* :mod:`eduplan.adoption` — endogenous technology-intensity extension
* :mod:`eduplan.tiers` — piecewise-wage barbell extension
* :mod:`eduplan.oracle` — grid-argmax and finite-difference verification
* :mod:`eduplan.skillindex` — Elo / PCA / rank-statistics pipeline
* :mod:`eduplan.cli` — batch command-line interface
"""

__version__ = "0.1.0"

from .economy import (AuditFailure, AuditReport, Scenario, ScenarioError,
                      audit_assumptions, eval_production, eval_wages,
                      make_scenario)
from .planner import (PlannerSolution, kkt_classify, solve_informed,
                      solve_informed_noncog, solve_naive)
from .mismatch import (GapCurve, MismatchCurve, WelfareReport, mismatch_curve,
                       noncog_gap_curve, welfare_decomposition)
from .adoption import (IntensityProblem, adoption_mismatch_curve,
                       interior_cost_set, marginal_benefit, solve_intensity)
from .tiers import (TierSolution, delta_gap, delta_prime_decomposition,
                    solve_informed_tiered, threshold_times,
                    tiered_mismatch_curve)
from .oracle import (PropositionReport, check_proposition, fd_cross_partial,
                     grid_argmax)
from .skillindex import (EloTable, JudgmentSet, bootstrap_ci, elo_run,
                         kendall_tau_b, pca_first_component,
                         symmetrize_judgments)

__all__ = [
    "AuditFailure", "AuditReport", "Scenario", "ScenarioError",
    "audit_assumptions", "eval_production", "eval_wages", "make_scenario",
    "PlannerSolution", "kkt_classify", "solve_informed",
    "solve_informed_noncog", "solve_naive",
    "GapCurve", "MismatchCurve", "WelfareReport", "mismatch_curve",
    "noncog_gap_curve", "welfare_decomposition",
    "IntensityProblem", "adoption_mismatch_curve", "interior_cost_set",
    "marginal_benefit", "solve_intensity",
    "TierSolution", "delta_gap", "delta_prime_decomposition",
    "solve_informed_tiered", "threshold_times", "tiered_mismatch_curve",
    "PropositionReport", "check_proposition", "fd_cross_partial", "grid_argmax",
    "EloTable", "JudgmentSet", "bootstrap_ci", "elo_run", "kendall_tau_b",
    "pca_first_component", "symmetrize_judgments",
    "__version__",
]

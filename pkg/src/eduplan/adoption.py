"""Endogenous technology-intensity choice: school versus planner.

Both agents pick an intensity alpha in [0, 1] against a linear cost. The
school prices the boosted skill at the stale anchor pA and ignores the
unpriced-skill harm; the planner uses the suppressed wage wA and internalizes
the harm. Marginal benefits are linear in alpha for this family, so interior
solutions are closed-form and the widening condition is a single parameter
inequality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import Scenario

SCHOOL = "school"
PLANNER = "planner"

NO_ADOPTION = "no-adoption"
FULL_ADOPTION = "full-adoption"
INTERIOR = "interior"


@dataclass(frozen=True)
class IntensityProblem:
    """Fixed-allocation intensity choice data.

    ``m`` is the productive scale of the boosted skill at the fixed
    allocation, m(tA) = aA*tA - bA*tA**2. The unpriced-skill levels use
    cA*tA + cB*tB - chi*alpha - xi*alpha**2; cA/cB/tB only shift levels and
    default to zero for standalone problems.
    """

    tA: float
    K: float
    m: float
    phi: float
    psi: float
    chi: float
    xi: float
    gamma: float
    pA: float
    wA: float
    tB: float = 0.0
    cA: float = 0.0
    cB: float = 0.0

    def __post_init__(self):
        if self.tA <= 0:
            raise ValueError("tA must be > 0")
        if self.m <= 0:
            raise ValueError("m must be > 0")
        if self.psi <= 0 or self.phi <= 2 * self.psi:
            raise ValueError("requires phi > 2*psi > 0")
        if self.chi <= 0:
            raise ValueError("chi must be > 0")
        if self.xi < 0:
            raise ValueError("xi must be >= 0")
        if self.gamma <= 0:
            raise ValueError("gamma must be > 0")
        if not self.pA >= self.wA > 0:
            raise ValueError("requires pA >= wA > 0")


@dataclass(frozen=True)
class CostInterval:
    lo: float
    hi: float
    nonEmpty: bool


@dataclass(frozen=True)
class IntensitySolution:
    alpha: float
    case: str
    lambda0: float
    lambda1: float


@dataclass(frozen=True)
class AdoptionCurve:
    cGrid: np.ndarray
    alphaSchool: np.ndarray
    alphaPlanner: np.ndarray
    gapAlpha: np.ndarray
    gapC: np.ndarray
    CSchool: np.ndarray
    CPlanner: np.ndarray
    wideningPredicted: bool


def intensity_problem_from_scenario(s: Scenario, t_a: float, k: float) -> IntensityProblem:
    """Derive the intensity problem at a fixed allocation and ambient capital."""
    if s.adoption is None:
        raise ValueError("scenario has no adoption table")
    if k <= s.K0:
        raise ValueError("K must exceed K0 for the intensity extension")
    ad = s.adoption
    m = s.prodA.a * t_a - s.prodA.b * t_a * t_a
    return IntensityProblem(tA=t_a, K=k, m=m, phi=ad.phi, psi=ad.psi,
                            chi=ad.chi, xi=ad.xi, gamma=s.gamma,
                            pA=s.pA, wA=float(s.wageA.value(k)),
                            tB=s.T - t_a, cA=s.noncog.cA, cB=s.noncog.cB)


def noncog_at_intensity(p: IntensityProblem, alpha):
    """Unpriced-skill level at the fixed allocation and intensity alpha."""
    return p.cA * p.tA + p.cB * p.tB - p.chi * alpha - p.xi * alpha * alpha


def marginal_benefit(p: IntensityProblem, agent: str, alpha):
    """Perceived marginal benefit of intensity; strictly decreasing in alpha."""
    if np.any(np.asarray(alpha) < 0) or np.any(np.asarray(alpha) > 1):
        raise ValueError("alpha must lie in [0, 1]")
    skill_term = p.m * (p.phi - 2.0 * p.psi * alpha)
    if agent == SCHOOL:
        return p.pA * skill_term
    if agent == PLANNER:
        return p.wA * skill_term - p.gamma * (p.chi + 2.0 * p.xi * alpha)
    raise ValueError(f"agent must be 'school' or 'planner', got {agent!r}")


def net_benefit(p: IntensityProblem, agent: str, alpha, c: float):
    """Total benefit net of linear cost; the quantity each agent maximizes."""
    skill_level = p.m * (p.phi * alpha - p.psi * alpha * alpha)
    if agent == SCHOOL:
        gross = p.pA * skill_level
    elif agent == PLANNER:
        gross = p.wA * skill_level - p.gamma * (p.chi * alpha + p.xi * alpha * alpha)
    else:
        raise ValueError(f"agent must be 'school' or 'planner', got {agent!r}")
    return gross - c * alpha


def interior_cost_set(p: IntensityProblem) -> CostInterval:
    """Open cost interval on which both agents choose interior intensities."""
    lo = float(marginal_benefit(p, SCHOOL, 1.0))
    hi = float(marginal_benefit(p, PLANNER, 0.0))
    return CostInterval(lo=lo, hi=hi, nonEmpty=hi > lo)


def solve_intensity(p: IntensityProblem, agent: str, c: float) -> IntensitySolution:
    """KKT-classified intensity choice at marginal cost c.

    Interior solutions are closed-form since marginal benefit is linear:
    school alpha = (phi - c/(pA*m)) / (2*psi); planner alpha =
    (wA*m*phi - gamma*chi - c) / (2*(wA*m*psi + gamma*xi)).
    """
    if c <= 0:
        raise ValueError(f"c must be > 0, got {c}")
    mb0 = float(marginal_benefit(p, agent, 0.0))
    mb1 = float(marginal_benefit(p, agent, 1.0))
    if c >= mb0:
        return IntensitySolution(alpha=0.0, case=NO_ADOPTION,
                                 lambda0=c - mb0, lambda1=0.0)
    if c <= mb1:
        return IntensitySolution(alpha=1.0, case=FULL_ADOPTION,
                                 lambda0=0.0, lambda1=mb1 - c)
    if agent == SCHOOL:
        alpha = (p.phi - c / (p.pA * p.m)) / (2.0 * p.psi)
    else:
        alpha = (p.wA * p.m * p.phi - p.gamma * p.chi - c) / (
            2.0 * (p.wA * p.m * p.psi + p.gamma * p.xi))
    alpha = min(max(alpha, 0.0), 1.0)
    return IntensitySolution(alpha=alpha, case=INTERIOR, lambda0=0.0, lambda1=0.0)


def widening_predicted(p: IntensityProblem) -> bool:
    """Family form of the steeper-planner-slope condition for a widening gap."""
    return p.gamma * p.xi > (p.pA - p.wA) * p.m * p.psi


def adoption_mismatch_curve(p: IntensityProblem, c_grid) -> AdoptionCurve:
    """Intensity and unpriced-skill gaps along a decreasing cost grid."""
    c = np.atleast_1d(np.asarray(c_grid, dtype=float))
    if c.size == 0:
        raise ValueError("c grid must be non-empty")
    if c.size > 1 and np.any(np.diff(c) >= 0):
        raise ValueError("c grid must be strictly decreasing")
    interval = interior_cost_set(p)
    for cv in c:
        if not interval.lo < cv < interval.hi:
            raise ValueError(
                f"c={cv!r} lies outside the interior cost set "
                f"({interval.lo:.6g}, {interval.hi:.6g})")
    school = np.array([solve_intensity(p, SCHOOL, cv).alpha for cv in c])
    planner = np.array([solve_intensity(p, PLANNER, cv).alpha for cv in c])
    c_school = noncog_at_intensity(p, school)
    c_planner = noncog_at_intensity(p, planner)
    return AdoptionCurve(cGrid=c, alphaSchool=school, alphaPlanner=planner,
                         gapAlpha=school - planner, gapC=c_planner - c_school,
                         CSchool=c_school, CPlanner=c_planner,
                         wideningPredicted=widening_predicted(p))

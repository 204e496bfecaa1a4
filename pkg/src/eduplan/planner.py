"""Time-allocation solvers: strictly concave scalar maximization on [0, T].

All three planner objectives share the same structure — a strictly concave
function of tA with a strictly decreasing derivative — so one bisection solver
with KKT corner screening covers them. Closed-form solutions for the quadratic
family exist but live in the test suite as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .economy import Scenario

# Bisection stops when the bracket is narrower than TOL_T or the derivative
# magnitude falls below TOL_FOC.
TOL_T = 1e-11
TOL_FOC = 1e-10

INTERIOR = "interior"
LOWER_CORNER = "lower-corner"
UPPER_CORNER = "upper-corner"


class SolverError(RuntimeError):
    """Internal inconsistency in the solver (violated concavity premise)."""


@dataclass(frozen=True)
class SkillBundle:
    A: float
    B: float
    C: float


@dataclass(frozen=True)
class PlannerSolution:
    tA: float
    tB: float
    case: str
    mu0: float
    muT: float
    utility: float
    skills: SkillBundle
    focResidual: float


def noncog_output(s: Scenario, t_a, k):
    """Realized unpriced-skill output at allocation tA under capital K."""
    return s.noncog.value(t_a, s.T - t_a, s.g(k))


def naive_utility(s: Scenario, k, t):
    """Objective of the planner holding prices fixed at the K0 anchor."""
    ke = s.g(k)
    return s.pA * s.prodA.value(t, ke) + s.pB * s.prodB.value(s.T - t, ke)


def naive_marginal(s: Scenario, k, t):
    ke = s.g(k)
    return s.pA * s.prodA.d_dt(t, ke) - s.pB * s.prodB.d_dt(s.T - t, ke)


def informed_utility(s: Scenario, k, t):
    """Objective of the planner pricing skills at the true wages w(K)."""
    ke = s.g(k)
    return (s.wageA.value(k) * s.prodA.value(t, ke)
            + s.wageB.value(k) * s.prodB.value(s.T - t, ke))


def informed_marginal(s: Scenario, k, t):
    ke = s.g(k)
    return (s.wageA.value(k) * s.prodA.d_dt(t, ke)
            - s.wageB.value(k) * s.prodB.d_dt(s.T - t, ke))


def noncog_utility(s: Scenario, k, t):
    """Informed objective extended with the gamma-weighted unpriced skills."""
    return informed_utility(s, k, t) + s.gamma * noncog_output(s, t, k)


def noncog_marginal(s: Scenario, k, t):
    return informed_marginal(s, k, t) + s.gamma * s.noncog.d_dta_composite(s.g(k))


PLANNERS = {
    "naive": (naive_utility, naive_marginal),
    "informed": (informed_utility, informed_marginal),
    "noncog": (noncog_utility, noncog_marginal),
}


def kkt_classify(d_at_0: float, d_at_t: float):
    """Classify the box-constrained maximum from boundary derivatives.

    With a strictly decreasing derivative, d(0) <= 0 pins the lower corner,
    d(T) >= 0 the upper corner, and a sign change an interior root. Returns
    (case, mu0, muT) with multipliers satisfying complementary slackness.
    """
    if not (d_at_0 == d_at_0 and d_at_t == d_at_t):  # NaN guard
        raise SolverError("non-finite boundary derivatives")
    lower = d_at_0 <= 0.0
    upper = d_at_t >= 0.0
    if lower and upper:
        raise SolverError(
            "derivative non-positive at 0 and non-negative at T: "
            "objective cannot be strictly concave")
    if lower:
        return LOWER_CORNER, -d_at_0, 0.0
    if upper:
        return UPPER_CORNER, 0.0, d_at_t
    return INTERIOR, 0.0, 0.0


def _bisect_root(marginal, lo: float, hi: float) -> float:
    # marginal(lo) > 0 > marginal(hi) is guaranteed by KKT screening.
    while hi - lo > TOL_T:
        mid = 0.5 * (lo + hi)
        d = marginal(mid)
        if abs(d) < TOL_FOC:
            return mid
        if d > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _solve(s: Scenario, k: float, planner: str) -> PlannerSolution:
    if k < 0:
        raise ValueError(f"K must be >= 0, got {k}")
    utility_fn, marginal_fn = PLANNERS[planner]
    case, mu0, mu_t = kkt_classify(marginal_fn(s, k, 0.0), marginal_fn(s, k, s.T))
    if case == LOWER_CORNER:
        t_a, residual = 0.0, 0.0
    elif case == UPPER_CORNER:
        t_a, residual = s.T, 0.0
    else:
        t_a = _bisect_root(lambda t: marginal_fn(s, k, t), 0.0, s.T)
        residual = abs(marginal_fn(s, k, t_a))
    ke = s.g(k)
    skills = SkillBundle(A=float(s.prodA.value(t_a, ke)),
                         B=float(s.prodB.value(s.T - t_a, ke)),
                         C=float(noncog_output(s, t_a, k)))
    return PlannerSolution(tA=t_a, tB=s.T - t_a, case=case, mu0=mu0, muT=mu_t,
                           utility=float(utility_fn(s, k, t_a)), skills=skills,
                           focResidual=residual)


def solve_naive(s: Scenario, k: float) -> PlannerSolution:
    """Maximize the anchored-price objective over tA in [0, T]."""
    return _solve(s, k, "naive")


def solve_informed(s: Scenario, k: float) -> PlannerSolution:
    """Maximize the wage-aware objective over tA in [0, T]."""
    return _solve(s, k, "informed")


def solve_informed_noncog(s: Scenario, k: float) -> PlannerSolution:
    """Maximize the wage-aware objective including unpriced skills."""
    return _solve(s, k, "noncog")

"""Piecewise-wage extension: threshold targets, barbell choice, mismatch jumps.

The informed planner faces lump-sum wage tiers in the boosted skill, so its
objective is discontinuous and strictly decreasing inside each tier. The
optimum therefore sits on a tier's lower boundary; with an ordered schedule it
reduces to a two-point barbell decided by the sign of the expertise premium
net of the forgone skill-B value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import Scenario, audit_assumptions
from .mismatch import AUDIT_T_POINTS, EPS_MONO, _validate_k_grid
from .planner import solve_naive

# Bracket width for threshold-time root finding.
TAU_TOL = 1e-12

LITERACY = "literacy"
EXPERTISE = "expertise"

TIER_AUDIT = ("A1", "A2", "A4", "A5", "thresholds", "tier-ordering")


class TierError(ValueError):
    """Unreachable thresholds or a violated tier ordering."""


@dataclass(frozen=True)
class TierSolution:
    K: float
    tauLow: float
    tauHigh: float
    delta: float
    choice: str
    tInf: float
    candidateUtilities: tuple  # at tA in {0, tauLow, tauHigh}


@dataclass(frozen=True)
class DeltaPrimeTerms:
    a: float  # direct wage effect
    b: float  # wage effect on skill-B value
    c: float  # time-saving effect on skill B
    d: float  # education effect on skill B
    fdTotal: float

    @property
    def analytic_total(self) -> float:
        return self.a + self.b + self.c + self.d


@dataclass(frozen=True)
class TieredMismatchCurve:
    KGrid: np.ndarray
    tauLow: np.ndarray
    tauHigh: np.ndarray
    delta: np.ndarray
    choice: tuple
    tNaive: np.ndarray
    tInf: np.ndarray
    mismatch: np.ndarray
    jumpFlag: np.ndarray


def _tiers(s: Scenario):
    if s.tiers is None:
        raise TierError("scenario has no tiers table")
    return s.tiers


def _check_reachable(s: Scenario, k: float) -> None:
    ti = _tiers(s)
    ke = s.g(k)
    if not s.prodA.d_dt(s.T, ke) > 0:
        raise TierError(f"production not strictly increasing on [0, T] at K={k}")
    if not s.prodA.value(0.0, ke) < ti.Alow:
        raise TierError(f"basic threshold unreachable at K={k}")
    if not s.prodA.value(s.T, ke) > ti.Ahigh:
        raise TierError(f"advanced threshold unreachable at K={k}")


def _bisect_threshold(s: Scenario, ke: float, level: float, tol: float) -> float:
    # Keep the invariant f(hi) >= level so the returned time lands in the
    # upper tier under the right-continuous wage rule, bit-for-bit.
    lo, hi = 0.0, s.T
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if s.prodA.value(mid, ke) >= level:
            hi = mid
        else:
            lo = mid
    return hi


def threshold_times(s: Scenario, k: float, tol: float = TAU_TOL):
    """Times at which the boosted skill exactly reaches the two thresholds."""
    _check_reachable(s, k)
    ti = s.tiers
    ke = s.g(k)
    tau_low = _bisect_threshold(s, ke, ti.Alow, tol)
    tau_high = _bisect_threshold(s, ke, ti.Ahigh, tol)
    return tau_low, tau_high


def tier_wage(s: Scenario, k: float, skill_level):
    """Right-continuous wage tier for an achieved skill level."""
    ti = _tiers(s)
    return np.where(skill_level >= ti.Ahigh, ti.wHigh.value(k),
                    np.where(skill_level >= ti.Alow, ti.wMid.value(k),
                             ti.wLow.value(k)))


def tiered_utility(s: Scenario, k: float, t):
    """Informed objective under the piecewise wage schedule; vectorizes in t."""
    ke = s.g(k)
    return tier_wage(s, k, s.prodA.value(t, ke)) + s.wageB.value(k) * s.prodB.value(s.T - t, ke)


def delta_gap(s: Scenario, k: float, tol: float = TAU_TOL) -> float:
    """Expertise premium minus the skill-B value forgone to reach it."""
    ti = _tiers(s)
    _, tau_high = threshold_times(s, k, tol)
    ke = s.g(k)
    gain = ti.wHigh.value(k) - ti.wLow.value(k)
    cost = s.wageB.value(k) * (s.prodB.value(s.T, ke)
                               - s.prodB.value(s.T - tau_high, ke))
    return float(gain - cost)


def delta_prime_decomposition(s: Scenario, k: float, h: float) -> DeltaPrimeTerms:
    """Four analytic contributions to d(delta)/dK plus a central difference.

    The threshold derivative in term (c) comes from the implicit-function
    quotient, not from differencing, so the residual against fdTotal isolates
    the outer finite-difference truncation. The K +- h evaluations use a
    tighter root tolerance for the same reason.
    """
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    if k - h < 0:
        raise ValueError("K - h must stay non-negative")
    ti = _tiers(s)
    # 1e-14 keeps threshold rounding well below the O(h^2) truncation signal.
    fd_tol = min(TAU_TOL, 1e-14)
    _, tau = threshold_times(s, k, fd_tol)
    ke = s.g(k)
    wb = s.wageB.value(k)

    term_a = float(ti.wHigh.derivative(k) - ti.wLow.derivative(k))
    term_b = float(s.wageB.derivative(k) * (s.prodB.value(s.T - tau, ke)
                                            - s.prodB.value(s.T, ke)))
    tau_prime = -(s.prodA.d_dke(tau) / s.prodA.d_dt(tau, ke)) * s.kappa
    term_c = float(wb * s.prodB.d_dt(s.T - tau, ke) * (-tau_prime))
    term_d = float(wb * s.kappa * (s.prodB.d_dke(s.T - tau) - s.prodB.d_dke(s.T)))

    fd_total = (delta_gap(s, k + h, fd_tol) - delta_gap(s, k - h, fd_tol)) / (2.0 * h)
    return DeltaPrimeTerms(a=term_a, b=term_b, c=term_c, d=term_d,
                           fdTotal=float(fd_total))


def _check_ordering(s: Scenario, k: float) -> None:
    ti = _tiers(s)
    w_low, w_mid, w_high = (float(ti.wLow.value(k)), float(ti.wMid.value(k)),
                            float(ti.wHigh.value(k)))
    if not (w_high > w_low >= w_mid):
        raise TierError(
            f"tier ordering violated at K={k}: requires wHigh > wLow >= wMid, "
            f"got ({w_high:.6g}, {w_low:.6g}, {w_mid:.6g})")


def solve_informed_tiered(s: Scenario, k: float) -> TierSolution:
    """Pick the better barbell end by the sign of the premium gap."""
    _check_ordering(s, k)
    tau_low, tau_high = threshold_times(s, k)
    candidates = (0.0, tau_low, tau_high)
    utilities = tuple(float(tiered_utility(s, k, t)) for t in candidates)
    delta = delta_gap(s, k)
    if delta > 0:
        choice, t_inf = EXPERTISE, tau_high
    else:
        choice, t_inf = LITERACY, 0.0  # ties break toward literacy
    return TierSolution(K=k, tauLow=tau_low, tauHigh=tau_high, delta=delta,
                        choice=choice, tInf=t_inf, candidateUtilities=utilities)


def tiered_mismatch_curve(s: Scenario, k_grid) -> TieredMismatchCurve:
    """Naive-minus-informed allocation gap (un-normalized) under tiered wages."""
    k = _validate_k_grid(s, k_grid)
    t_grid = np.linspace(0.0, s.T, AUDIT_T_POINTS)
    audit_assumptions(s, t_grid, k).require(TIER_AUDIT)

    solutions = [solve_informed_tiered(s, kv) for kv in k]
    t_naive = np.array([solve_naive(s, kv).tA for kv in k])
    t_inf = np.array([sol.tInf for sol in solutions])
    choice = tuple(sol.choice for sol in solutions)
    jump = np.zeros(k.size, dtype=bool)
    jump[1:] = [choice[i] != choice[i - 1] for i in range(1, k.size)]
    return TieredMismatchCurve(
        KGrid=k,
        tauLow=np.array([sol.tauLow for sol in solutions]),
        tauHigh=np.array([sol.tauHigh for sol in solutions]),
        delta=np.array([sol.delta for sol in solutions]),
        choice=choice,
        tNaive=t_naive,
        tInf=t_inf,
        mismatch=t_naive - t_inf,
        jumpFlag=jump,
    )


def mismatch_strictly_increasing(curve: TieredMismatchCurve) -> bool:
    """True when every consecutive mismatch difference is strictly positive."""
    return bool(np.all(np.diff(curve.mismatch) > EPS_MONO))

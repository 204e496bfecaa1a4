"""Parametric economy: functional families, scenario validation, assumption audit.

The model is fully parametric so every structural assumption reduces to a
checkable inequality:

* skill production is quadratic in time, ``(a + eta*Ke)*t - b*t**2``,
* educational capital is linear in ambient capital, ``Ke = kappa*K``,
* wage levels follow the exponential family ``winf + (w0 - winf)*exp(-delta*K)``.

Anchor prices are always derived from the wage curves at ``K0``; they are never
user-set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

# |margin| below this is numerically indistinguishable from zero.
EPS_SIGN = 1e-9

PASS = "pass"
FAIL = "fail"
INDETERMINATE = "indeterminate"

#: Canonical audit order; every report carries exactly these ids.
AUDIT_IDS = ("A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8",
             "thresholds", "tier-ordering")


class ScenarioError(ValueError):
    """A scenario document violates a constructive invariant."""


class AuditFailure(ValueError):
    """An operation refused to run because an assumption audit failed."""

    def __init__(self, assumption: str, message: str):
        super().__init__(message)
        self.assumption = assumption


@dataclass(frozen=True)
class Production:
    """Quadratic skill production ``(a + eta*Ke)*t - b*t**2``."""

    a: float
    b: float
    eta: float

    def value(self, t, ke):
        return (self.a + self.eta * ke) * t - self.b * t * t

    def d_dt(self, t, ke):
        return self.a + self.eta * ke - 2.0 * self.b * t

    def d2_dt2(self):
        return -2.0 * self.b

    def d_dke(self, t):
        return self.eta * t


@dataclass(frozen=True)
class WageCurve:
    """Exponential wage level ``winf + (w0 - winf)*exp(-delta*K)``."""

    w0: float
    winf: float
    delta: float

    def value(self, k):
        return self.winf + (self.w0 - self.winf) * np.exp(-self.delta * k)

    def derivative(self, k):
        return -self.delta * (self.w0 - self.winf) * np.exp(-self.delta * k)


@dataclass(frozen=True)
class NonCognitive:
    """Linear unpriced-skill technology ``(cA - muA*Ke)*tA + (cB - muB*Ke)*tB - rho*Ke``."""

    cA: float
    cB: float
    muA: float
    muB: float
    rho: float

    def value(self, t_a, t_b, ke):
        return (self.cA - self.muA * ke) * t_a + (self.cB - self.muB * ke) * t_b - self.rho * ke

    def d_dta_composite(self, ke):
        # d/dtA of value(tA, T - tA, ke): time shifted from B to A.
        return (self.cA - self.cB) - (self.muA - self.muB) * ke


@dataclass(frozen=True)
class AdoptionTech:
    """Intensity-extension parameters (benefit curvature and unpriced harm)."""

    phi: float
    psi: float
    chi: float
    xi: float


@dataclass(frozen=True)
class TierSchedule:
    """Piecewise wage extension: two skill thresholds and three level curves."""

    Alow: float
    Ahigh: float
    wLow: WageCurve
    wMid: WageCurve
    wHigh: WageCurve


@dataclass(frozen=True)
class Scenario:
    T: float
    K0: float
    kappa: float
    prodA: Production
    prodB: Production
    wageA: WageCurve
    wageB: WageCurve
    noncog: NonCognitive
    gamma: float
    pA: float
    pB: float
    adoption: Optional[AdoptionTech] = None
    tiers: Optional[TierSchedule] = None

    def g(self, k):
        """Educational capital induced by ambient capital."""
        return self.kappa * k


@dataclass(frozen=True)
class ProductionEval:
    value: float
    d_dt: float
    d2_dt2: float
    d_dKe: float
    d2_dt_dKe: float


@dataclass(frozen=True)
class WagePoint:
    wA: float
    wB: float
    wA_prime: float
    wB_prime: float


@dataclass(frozen=True)
class AuditEntry:
    assumption: str
    status: str
    worst_point: Optional[tuple]  # (tA or None, K)
    margin: float


@dataclass(frozen=True)
class AuditReport:
    entries: tuple

    def entry(self, assumption: str) -> AuditEntry:
        for e in self.entries:
            if e.assumption == assumption:
                return e
        raise KeyError(assumption)

    def failures(self):
        return [e.assumption for e in self.entries if e.status == FAIL]

    def require(self, assumptions: Sequence[str]) -> None:
        """Raise AuditFailure unless every listed assumption has status pass."""
        for a in assumptions:
            e = self.entry(a)
            if e.status != PASS:
                raise AuditFailure(a, f"audit did not pass {a}: status={e.status}, "
                                      f"margin={e.margin:.6g}, worst point={e.worst_point}")

    def to_dict(self) -> dict:
        return {
            "epsSign": EPS_SIGN,
            "entries": [
                {
                    "assumption": e.assumption,
                    "status": e.status,
                    "worst_point": None if e.worst_point is None else
                        {"tA": e.worst_point[0], "K": e.worst_point[1]},
                    "margin": e.margin,
                }
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioError(message)


def _get(table: Mapping, key: str, context: str):
    try:
        return float(table[key])
    except KeyError:
        raise ScenarioError(f"missing required key '{context}.{key}'") from None


def _wage_from_table(table: Mapping, context: str) -> WageCurve:
    return WageCurve(w0=_get(table, "w0", context),
                     winf=_get(table, "winf", context),
                     delta=_get(table, "delta", context))


def make_scenario(config: Mapping) -> Scenario:
    """Build and validate a Scenario from a parsed scenario document.

    ``config`` follows the TOML layout: top-level T/K0/kappa/gamma plus tables
    [production.A], [production.B], [wages.A], [wages.B], [noncog] and the
    optional [adoption] and [tiers]. Anchor prices are computed from the wage
    curves at K0.
    """
    T = _get(config, "T", "")
    K0 = _get(config, "K0", "")
    kappa = _get(config, "kappa", "")
    gamma = _get(config, "gamma", "")

    prod = config.get("production", {})
    pa_t, pb_t = prod.get("A", {}), prod.get("B", {})
    prodA = Production(a=_get(pa_t, "aA", "production.A"),
                       b=_get(pa_t, "bA", "production.A"),
                       eta=_get(pa_t, "etaA", "production.A"))
    prodB = Production(a=_get(pb_t, "aB", "production.B"),
                       b=_get(pb_t, "bB", "production.B"),
                       eta=_get(pb_t, "etaB", "production.B"))

    wages = config.get("wages", {})
    wa_t, wb_t = wages.get("A", {}), wages.get("B", {})
    wAinf = _get(wa_t, "wAinf", "wages.A")
    wA0 = _get(wa_t, "wA0", "wages.A")
    deltaA = _get(wa_t, "deltaA", "wages.A")
    wB0 = _get(wb_t, "wB0", "wages.B")
    sB = _get(wb_t, "sB", "wages.B")
    deltaB = _get(wb_t, "deltaB", "wages.B")
    wageA = WageCurve(w0=wA0, winf=wAinf, delta=deltaA)
    # wB0 + sB*(1 - exp(-deltaB*K)) rewritten in the shared exponential form.
    wageB = WageCurve(w0=wB0, winf=wB0 + sB, delta=deltaB)

    nc_t = config.get("noncog", {})
    noncog = NonCognitive(cA=_get(nc_t, "cA", "noncog"),
                          cB=_get(nc_t, "cB", "noncog"),
                          muA=_get(nc_t, "muA", "noncog"),
                          muB=_get(nc_t, "muB", "noncog"),
                          rho=_get(nc_t, "rho", "noncog"))

    adoption = None
    if "adoption" in config:
        ad_t = config["adoption"]
        adoption = AdoptionTech(phi=_get(ad_t, "phi", "adoption"),
                                psi=_get(ad_t, "psi", "adoption"),
                                chi=_get(ad_t, "chi", "adoption"),
                                xi=_get(ad_t, "xi", "adoption"))

    tiers = None
    if "tiers" in config:
        ti_t = config["tiers"]
        tiers = TierSchedule(Alow=_get(ti_t, "Alow", "tiers"),
                             Ahigh=_get(ti_t, "Ahigh", "tiers"),
                             wLow=_wage_from_table(ti_t.get("wLow", {}), "tiers.wLow"),
                             wMid=_wage_from_table(ti_t.get("wMid", {}), "tiers.wMid"),
                             wHigh=_wage_from_table(ti_t.get("wHigh", {}), "tiers.wHigh"))

    _require(T > 0, "T must be > 0")
    _require(K0 >= 0, "K0 must be >= 0")
    _require(kappa > 0, "kappa must be > 0")
    _require(prodA.a > 0, "aA must be > 0")
    _require(prodB.a > 0, "aB must be > 0")
    _require(prodA.b > 0, "bA must be > 0")
    _require(prodB.b > 0, "bB must be > 0")
    _require(prodA.eta >= 0, "etaA must be >= 0")
    _require(prodB.eta >= 0, "etaB must be >= 0")
    _require(wAinf > 0, "wAinf must be > 0")
    _require(wA0 > wAinf, "wA0 must exceed wAinf")
    _require(deltaA > 0, "deltaA must be > 0")
    _require(wB0 > 0, "wB0 must be > 0")
    _require(sB >= 0, "sB must be >= 0")
    _require(deltaB >= 0, "deltaB must be >= 0")
    _require(noncog.cA >= 0, "cA must be >= 0")
    _require(noncog.cB > noncog.cA, "cB must exceed cA")
    _require(noncog.muB >= 0, "muB must be >= 0")
    _require(noncog.muA > noncog.muB, "muA must exceed muB")
    _require(noncog.rho > 0, "rho must be > 0")
    _require(gamma > 0, "gamma must be > 0")
    if adoption is not None:
        _require(adoption.psi > 0, "psi must be > 0")
        _require(adoption.phi > 2 * adoption.psi, "phi must exceed 2*psi")
        _require(adoption.chi > 0, "chi must be > 0")
        _require(adoption.xi >= 0, "xi must be >= 0")
    if tiers is not None:
        _require(tiers.Alow > 0, "Alow must be > 0")
        _require(tiers.Ahigh > tiers.Alow, "Ahigh must exceed Alow")
        for name, curve in (("wLow", tiers.wLow), ("wMid", tiers.wMid),
                            ("wHigh", tiers.wHigh)):
            _require(curve.w0 > 0, f"tiers.{name}.w0 must be > 0")
            _require(curve.winf > 0, f"tiers.{name}.winf must be > 0")
            _require(curve.delta > 0, f"tiers.{name}.delta must be > 0")

    pA = float(wageA.value(K0))
    pB = float(wageB.value(K0))
    return Scenario(T=T, K0=K0, kappa=kappa, prodA=prodA, prodB=prodB,
                    wageA=wageA, wageB=wageB, noncog=noncog, gamma=gamma,
                    pA=pA, pB=pB, adoption=adoption, tiers=tiers)


def eval_production(s: Scenario, skill: str, t: float, k: float) -> ProductionEval:
    """Evaluate one skill's production and its analytic partials at (t, g(K))."""
    if skill not in ("A", "B"):
        raise ValueError(f"skill must be 'A' or 'B', got {skill!r}")
    if not 0.0 <= t <= s.T:
        raise ValueError(f"t must lie in [0, T], got {t}")
    if k < 0:
        raise ValueError(f"K must be >= 0, got {k}")
    prod = s.prodA if skill == "A" else s.prodB
    ke = s.g(k)
    return ProductionEval(value=float(prod.value(t, ke)),
                          d_dt=float(prod.d_dt(t, ke)),
                          d2_dt2=float(prod.d2_dt2()),
                          d_dKe=float(prod.d_dke(t)),
                          d2_dt_dKe=prod.eta)


def eval_wages(s: Scenario, k: float) -> WagePoint:
    """Wage levels and analytic K-derivatives at ambient capital K."""
    if np.any(np.asarray(k) < 0):
        raise ValueError(f"K must be >= 0, got {k}")
    return WagePoint(wA=float(s.wageA.value(k)), wB=float(s.wageB.value(k)),
                     wA_prime=float(s.wageA.derivative(k)),
                     wB_prime=float(s.wageB.derivative(k)))


def informed_cross_partial(s: Scenario, t, k):
    """Analytic cross-partial of the informed objective in (tA, K).

    Decomposes as (a) the wage channel ``wA'*dfA/dt - wB'*dfB/dt`` plus
    (b) the education channel ``g'*(wA*etaA - wB*etaB)``; dominance requires
    (a) to outweigh (b). Vectorizes over t and k.
    """
    ke = s.g(k)
    wage_channel = (s.wageA.derivative(k) * s.prodA.d_dt(t, ke)
                    - s.wageB.derivative(k) * s.prodB.d_dt(s.T - t, ke))
    edu_channel = s.kappa * (s.wageA.value(k) * s.prodA.eta
                             - s.wageB.value(k) * s.prodB.eta)
    return wage_channel + edu_channel


def naive_cross_partial(s: Scenario, t, k):
    """Analytic cross-partial of the naive objective in (tA, K)."""
    del t  # constant in t for the quadratic family
    return s.kappa * (s.pA * s.prodA.eta - s.pB * s.prodB.eta) * np.ones_like(
        np.asarray(k, dtype=float))


def _classify(margin: float) -> str:
    if abs(margin) < EPS_SIGN:
        return INDETERMINATE
    return PASS if margin > 0 else FAIL


def _min_entry(assumption, field, t_axis, k_axis):
    """Build an AuditEntry from a pointwise margin field.

    ``field`` has shape (nt, nk) when t_axis is given, else (nk,).
    """
    field = np.asarray(field, dtype=float)
    if t_axis is None:
        i = int(np.argmin(field))
        worst = (None, float(k_axis[i]))
        margin = float(field[i])
    else:
        it, ik = np.unravel_index(int(np.argmin(field)), field.shape)
        worst = (float(t_axis[it]), float(k_axis[ik]))
        margin = float(field[it, ik])
    return AuditEntry(assumption=assumption, status=_classify(margin),
                      worst_point=worst, margin=margin)


def audit_assumptions(s: Scenario, t_grid, k_grid) -> AuditReport:
    """Audit every structural assumption on the given (t, K) grid.

    A failing assumption is a report entry, never an exception. Interiority
    (A3, A6) is deliberately not pre-audited; the solver's KKT classification
    settles it ex post, so those entries stay indeterminate with zero margin.
    """
    t = np.asarray(t_grid, dtype=float)
    k = np.asarray(k_grid, dtype=float)
    if t.size == 0 or k.size == 0:
        raise ValueError("audit grids must be non-empty")
    if np.any(t < 0) or np.any(t > s.T):
        raise ValueError("t grid must lie within [0, T]")
    if np.any(k < 0):
        raise ValueError("K grid must be non-negative")

    ke = s.g(k)
    tt = t[:, None]
    entries = []

    # A1: uniform strict concavity; the quadratic family has d2f/dt2 = -2b
    # exactly, so the uniform bound is 2*min(bA, bB).
    lam = 2.0 * min(s.prodA.b, s.prodB.b)
    entries.append(_min_entry("A1", np.full((t.size, k.size), lam), t, k))

    # A2: increasing differences of the naive objective.
    entries.append(_min_entry("A2", naive_cross_partial(s, None, k), None, k))

    # A3/A6: interiority, deferred to KKT classification.
    entries.append(AuditEntry("A3", INDETERMINATE, None, 0.0))

    # A4: wages bounded away from zero (floor taken as wAinf by construction).
    wa, wb = s.wageA.value(k), s.wageB.value(k)
    entries.append(_min_entry("A4", np.minimum(wa, wb), None, k))

    # A5: wage derivative signs, wA' < 0 and wB' >= 0.
    entries.append(_min_entry(
        "A5", np.minimum(-s.wageA.derivative(k), s.wageB.derivative(k)), None, k))

    entries.append(AuditEntry("A6", INDETERMINATE, None, 0.0))

    # A7: dominance of the wage channel in the informed cross-partial.
    entries.append(_min_entry("A7", -informed_cross_partial(s, tt, k[None, :]), t, k))

    # A8: the three derivative conditions of the unpriced-skill family.
    nc = s.noncog
    m_shift = -((nc.cA - nc.cB) - (nc.muA - nc.muB) * ke)            # (a)
    m_direct = s.kappa * (nc.muA * tt + nc.muB * (s.T - tt) + nc.rho)  # (b)
    m_synergy = s.kappa * (nc.muA - nc.muB)                          # (c)
    a8 = np.minimum(np.minimum(m_shift[None, :], m_direct), m_synergy)
    entries.append(_min_entry("A8", a8, t, k))

    if s.tiers is not None:
        ti = s.tiers
        reach_low = ti.Alow - s.prodA.value(0.0, ke)
        reach_high = s.prodA.value(s.T, ke) - ti.Ahigh
        increasing = s.prodA.d_dt(tt, ke[None, :])
        thr = np.minimum(np.minimum(reach_low, reach_high)[None, :], increasing)
        entries.append(_min_entry("thresholds", thr, t, k))

        order = np.minimum(ti.wHigh.value(k) - ti.wLow.value(k),
                           ti.wLow.value(k) - ti.wMid.value(k))
        entries.append(_min_entry("tier-ordering", order, None, k))
    else:
        entries.append(AuditEntry("thresholds", INDETERMINATE, None, 0.0))
        entries.append(AuditEntry("tier-ordering", INDETERMINATE, None, 0.0))

    return AuditReport(entries=tuple(entries))

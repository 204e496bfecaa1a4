"""Pairwise skill-ranking pipeline: symmetric Elo, PCA aggregation, rank stats.

Judgments arrive as order-tagged pairwise verdicts. Each (model, pair) group
with both presentation orders resolves to a win only when the orders agree;
any tie or inconsistency resolves to a draw. Elo replay is strictly
sequential in file order. Ratings are accumulated as exact rationals so the
zero-sum invariant holds bit-for-bit; only the logistic expected score is
evaluated in floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

ORDER_IJ = "IJ"
ORDER_JI = "JI"
FIRST, SECOND, TIE = "first", "second", "tie"


class UndefinedCorrelationError(ValueError):
    """Rank correlation is undefined (an all-tied input column)."""


class SignAmbiguityError(ValueError):
    """PC1 orientation cannot be fixed: the shared-factor reference vanishes."""


@dataclass(frozen=True)
class Judgment:
    model_id: str
    skill_i: str
    skill_j: str
    order: str  # "IJ" or "JI": which skill was presented first
    verdict: str  # "first", "second" or "tie"

    def __post_init__(self):
        if self.skill_i == self.skill_j:
            raise ValueError(f"skill pair must be distinct, got {self.skill_i!r} twice")
        if self.order not in (ORDER_IJ, ORDER_JI):
            raise ValueError(f"order must be 'IJ' or 'JI', got {self.order!r}")
        if self.verdict not in (FIRST, SECOND, TIE):
            raise ValueError(f"verdict must be first/second/tie, got {self.verdict!r}")

    def winner(self) -> Optional[str]:
        if self.verdict == TIE:
            return None
        presented = ((self.skill_i, self.skill_j) if self.order == ORDER_IJ
                     else (self.skill_j, self.skill_i))
        return presented[0] if self.verdict == FIRST else presented[1]


@dataclass(frozen=True)
class JudgmentSet:
    judgments: Tuple[Judgment, ...]
    roster: Tuple[str, ...]

    @classmethod
    def from_records(cls, judgments: Sequence[Judgment],
                     roster: Optional[Sequence[str]] = None) -> "JudgmentSet":
        if roster is None:
            seen = []
            for j in judgments:
                for sk in (j.skill_i, j.skill_j):
                    if sk not in seen:
                        seen.append(sk)
            roster = seen
        return cls(judgments=tuple(judgments), roster=tuple(roster))


@dataclass(frozen=True)
class ResolvedOutcome:
    skill_a: str
    skill_b: str
    w_a: float  # 1 win, 0.5 draw, 0 loss for skill_a


@dataclass(frozen=True)
class SymmetrizedJudgments:
    outcomes: Tuple[ResolvedOutcome, ...]
    single_order_pairs: int  # pairs seen in only one presentation order


@dataclass(frozen=True)
class EloConfig:
    r0: float = 1000.0
    k_factor: float = 32.0


@dataclass(frozen=True)
class EloTable:
    ratings: Dict[str, Fraction]
    comparisons: Dict[str, int]
    config: EloConfig = field(default_factory=EloConfig)

    def rating(self, skill: str) -> float:
        return float(self.ratings[skill])

    def total_rating(self) -> Fraction:
        return sum(self.ratings.values(), Fraction(0))


@dataclass(frozen=True)
class BootstrapResult:
    tau: float
    lo: float
    hi: float
    method: str
    B: int
    seed: int


def symmetrize_judgments(raw: JudgmentSet) -> SymmetrizedJudgments:
    """Resolve order-paired verdicts into win/draw/loss outcomes.

    Consistent winners across both orders score a win; inconsistency or any
    tie verdict scores a draw. Pairs with a single recorded order keep that
    verdict and are counted in ``single_order_pairs``. Output preserves the
    first-appearance order of (model, pair) groups.
    """
    groups: Dict[tuple, list] = {}
    order_keys = []
    seen_presentations = set()
    for j in raw.judgments:
        presented = ((j.skill_i, j.skill_j) if j.order == ORDER_IJ
                     else (j.skill_j, j.skill_i))
        dup_key = (j.model_id, presented)
        if dup_key in seen_presentations:
            raise ValueError(
                f"duplicate judgment for model {j.model_id!r}, presentation "
                f"{presented[0]!r} vs {presented[1]!r}")
        seen_presentations.add(dup_key)
        key = (j.model_id, frozenset((j.skill_i, j.skill_j)))
        if key not in groups:
            groups[key] = []
            order_keys.append(key)
        groups[key].append(j)

    outcomes = []
    single_order = 0
    for key in order_keys:
        records = groups[key]
        lead = records[0]
        skill_a, skill_b = lead.skill_i, lead.skill_j
        if len(records) == 2:
            w1, w2 = records[0].winner(), records[1].winner()
            if w1 is not None and w1 == w2:
                w_a = 1.0 if w1 == skill_a else 0.0
            else:
                w_a = 0.5
        else:
            single_order += 1
            w = lead.winner()
            w_a = 0.5 if w is None else (1.0 if w == skill_a else 0.0)
        outcomes.append(ResolvedOutcome(skill_a=skill_a, skill_b=skill_b, w_a=w_a))
    return SymmetrizedJudgments(outcomes=tuple(outcomes),
                                single_order_pairs=single_order)


def expected_score(r_a: float, r_b: float) -> float:
    """Logistic expected outcome, base 10, scale 400."""
    return 1.0 / (1.0 + 10.0 ** ((r_b - r_a) / 400.0))


def elo_run(outcomes: Sequence[ResolvedOutcome], roster: Sequence[str],
            config: EloConfig = EloConfig()) -> EloTable:
    """Sequentially replay outcomes into ratings.

    The paired update R_A += K*(W_A - E_A), R_B -= K*(W_A - E_A) is applied in
    exact rational arithmetic, so the total rating equals R0 * len(roster)
    after any replay.
    """
    ratings = {skill: Fraction(config.r0) for skill in roster}
    counts = {skill: 0 for skill in roster}
    k = Fraction(config.k_factor)
    for o in outcomes:
        if o.skill_a not in ratings or o.skill_b not in ratings:
            missing = o.skill_a if o.skill_a not in ratings else o.skill_b
            raise ValueError(f"unknown skill id {missing!r}")
        e_a = expected_score(float(ratings[o.skill_a]), float(ratings[o.skill_b]))
        delta = k * (Fraction(o.w_a) - Fraction(e_a))
        ratings[o.skill_a] += delta
        ratings[o.skill_b] -= delta
        counts[o.skill_a] += 1
        counts[o.skill_b] += 1
    return EloTable(ratings=ratings, comparisons=counts, config=config)


def pca_first_component(scores) -> np.ndarray:
    """First principal component of a skills-by-models score matrix.

    Columns are standardized to mean 0 and sample variance 1; PC1 comes from
    the eigen-decomposition of the (small) column correlation matrix. The
    sign is oriented so PC1 correlates non-negatively with the row mean of
    the standardized columns.
    """
    x = np.asarray(scores, dtype=float)
    if x.ndim != 2:
        raise ValueError("scores must be a 2-D skills-by-models matrix")
    n_skills, n_models = x.shape
    if n_skills < 3:
        raise ValueError(f"need at least 3 skills, got {n_skills}")
    if n_models < 2:
        raise ValueError(f"need at least 2 models, got {n_models}")
    if not np.all(np.isfinite(x)):
        raise ValueError("scores must be finite with no missing cells")
    std = x.std(axis=0, ddof=1)
    if np.any(std == 0):
        raise ValueError(f"zero-variance column at index {int(np.argmin(std))}")
    z = (x - x.mean(axis=0)) / std
    corr = z.T @ z / (n_skills - 1)
    _, vecs = np.linalg.eigh(corr)
    pc1 = z @ vecs[:, -1]

    reference = z.mean(axis=1)
    ref_norm = float(np.linalg.norm(reference))
    pc_norm = float(np.linalg.norm(pc1))  # positive: leading eigenvalue >= 1
    if ref_norm <= 1e-12 * max(1.0, pc_norm):
        raise SignAmbiguityError(
            "PC1 orientation is ambiguous: standardized columns average to zero")
    orientation = float(pc1 @ reference) / (pc_norm * ref_norm)
    if abs(orientation) < 1e-12:
        raise SignAmbiguityError(
            "PC1 orientation is ambiguous: reference correlation is zero")
    return pc1 if orientation > 0 else -pc1


def _pair_counts(x: np.ndarray, y: np.ndarray):
    n = x.size
    i, j = np.triu_indices(n, k=1)
    sx = np.sign(x[i] - x[j])
    sy = np.sign(y[i] - y[j])
    prod = sx * sy
    concordant = int(np.count_nonzero(prod > 0))
    discordant = int(np.count_nonzero(prod < 0))
    ties_x = int(np.count_nonzero(sx == 0))
    ties_y = int(np.count_nonzero(sy == 0))
    return concordant, discordant, ties_x, ties_y


def kendall_tau_b(x, y) -> float:
    """Tie-corrected rank correlation via exact O(n^2) pair counting."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise ValueError("x and y must be 1-D sequences of equal length")
    n = xa.size
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    if not (np.all(np.isfinite(xa)) and np.all(np.isfinite(ya))):
        raise ValueError("x and y must be finite")
    concordant, discordant, ties_x, ties_y = _pair_counts(xa, ya)
    n0 = n * (n - 1) // 2
    if ties_x == n0 or ties_y == n0:
        raise UndefinedCorrelationError("correlation undefined: all-tied input")
    return (concordant - discordant) / math.sqrt((n0 - ties_x) * (n0 - ties_y))


def _all_tied(v: np.ndarray) -> bool:
    return bool(np.all(v == v[0]))


def _bca_interval(thetas: np.ndarray, theta_hat: float,
                  jackknife: np.ndarray, alpha: float):
    b = thetas.size
    prop = np.count_nonzero(thetas < theta_hat) / b
    prop = min(max(prop, 1.0 / (b + 1)), b / (b + 1.0))  # keep z0 finite
    z0 = norm.ppf(prop)
    centered = jackknife.mean() - jackknife
    denom = 6.0 * (np.sum(centered ** 2) ** 1.5)
    accel = float(np.sum(centered ** 3) / denom) if denom > 0 else 0.0

    def adjusted(q):
        z = norm.ppf(q)
        shift = 1.0 - accel * (z0 + z)
        if shift <= 0:
            return 1.0 if z0 + z > 0 else 0.0
        return float(norm.cdf(z0 + (z0 + z) / shift))

    lo_q, hi_q = adjusted(alpha / 2.0), adjusted(1.0 - alpha / 2.0)
    return (float(np.quantile(thetas, lo_q)), float(np.quantile(thetas, hi_q)))


def bootstrap_ci(x, y, B: int, method: str = "bca", seed: int = 0,
                 alpha: float = 0.05) -> BootstrapResult:
    """Paired bootstrap confidence interval for the tie-corrected correlation.

    Replicate b draws its resample from a generator keyed by (seed, b), so
    results are independent of evaluation order. Resamples with an all-tied
    column are redrawn; total redraws are capped at 10*B.
    """
    if method not in ("percentile", "bca"):
        raise ValueError(f"method must be 'percentile' or 'bca', got {method!r}")
    if B < 1000:
        raise ValueError(f"B must be >= 1000, got {B}")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    n = xa.size
    if n < 8:
        raise ValueError(f"need at least 8 observations, got {n}")
    tau_hat = kendall_tau_b(xa, ya)

    thetas = np.empty(B)
    redraws = 0
    for b in range(B):
        rng = np.random.default_rng((seed, b))
        while True:
            idx = rng.integers(0, n, size=n)
            xs, ys = xa[idx], ya[idx]
            if not (_all_tied(xs) or _all_tied(ys)):
                break
            redraws += 1
            if redraws > 10 * B:
                raise RuntimeError("resampling produced all-tied columns too often")
        thetas[b] = kendall_tau_b(xs, ys)

    if thetas.max() == thetas.min():
        lo = hi = float(thetas[0])
    elif method == "percentile":
        lo, hi = (float(np.quantile(thetas, alpha / 2.0)),
                  float(np.quantile(thetas, 1.0 - alpha / 2.0)))
    else:
        jack = np.empty(n)
        for i in range(n):
            keep = np.arange(n) != i
            jack[i] = kendall_tau_b(xa[keep], ya[keep])
        lo, hi = _bca_interval(thetas, tau_hat, jack, alpha)
    return BootstrapResult(tau=tau_hat, lo=lo, hi=hi, method=method, B=B, seed=seed)

"""Variance estimates, score intervals and Worst-Best rank intervals.

Interval bounds come in two orientations. ``ascending`` bounds count
positions by increasing score (position 1 holds the smallest score), which is
how the Worst-Best counting rules are written. ``display`` bounds use 1 for
the best entity, whichever direction of the score is better.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .criteria import Criterion, RankVector, ScoreVector, point_scores, scores_to_ranks
from .dominance import DominanceEstimate, dominance_matrix, joint_counts
from .numerics import binom_tail_gt, norm_quantile
from .rankmatrix import RankMatrix

# Majority threshold for the truncated criterion.
MAJORITY = 0.5
# Variances are floored here before building rank intervals, as in the
# reference analysis; keeps exactly tied, zero-variance scores overlapping.
VARIANCE_FLOOR = 1e-10


class Mode(enum.Enum):
    SIMULTANEOUS = "simultaneous"
    INDIVIDUAL = "individual"


class Quantile(enum.Enum):
    """Normal quantile used for an entity with significance level a.

    ``CODE`` uses Phi^-1(1 - a); ``TWO_SIDED`` uses Phi^-1(1 - a/2).
    """

    CODE = "code"
    TWO_SIDED = "two-sided"


def z_value(alpha: float | np.ndarray, quantile: Quantile = Quantile.TWO_SIDED) -> np.ndarray:
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    if ((a <= 0) | (a >= 1)).any():
        raise ValueError(f"significance levels must lie in (0, 1), got {a}")
    tail = a / 2 if quantile is Quantile.TWO_SIDED else a
    return np.array([norm_quantile(1.0 - t) for t in tail])


# -- variances ---------------------------------------------------------------


def var_cpdp(matrix: RankMatrix, dom: DominanceEstimate | None = None) -> np.ndarray:
    """Plug-in variance of each CPDP score, with per-pair overlap counts.

    Cross terms weight each (s, t) pair by the exact number of columns
    observed in rows s, t and i simultaneously.
    """
    dom = dominance_matrix(matrix) if dom is None else dom
    p, m_ki = dom.p, dom.overlap
    n = dom.n_entities
    with np.errstate(divide="ignore", invalid="ignore"):
        own = np.where(m_ki > 0, p * (1 - p) / m_ki, 0.0).sum(axis=0)
    off = ~np.eye(n, dtype=bool)
    out = np.empty(n)
    for i in range(n):
        hits, seen = joint_counts(matrix, i)
        pi, mi = p[:, i], m_ki[:, i].astype(float)
        # hits = seen * p_st(i), so seen * (p_st(i) - p_si p_ti) = hits - seen p_si p_ti
        num = hits - seen * np.outer(pi, pi)
        den = np.outer(mi, mi)
        cross = np.divide(num, den, out=np.zeros_like(den), where=(den > 0) & off)
        out[i] = own[i] + cross[off].sum()
    return np.maximum(out, 0.0)


def var_cpdp_complete(matrix: RankMatrix, dom: DominanceEstimate | None = None) -> np.ndarray:
    """Complete-data variance with a single 1/m factor."""
    if not matrix.is_complete:
        raise ValueError("var_cpdp_complete needs a complete matrix")
    dom = dominance_matrix(matrix) if dom is None else dom
    p = dom.p
    m = matrix.n_rankers
    n = dom.n_entities
    off = ~np.eye(n, dtype=bool)
    out = np.empty(n)
    for i in range(n):
        hits, _ = joint_counts(matrix, i)
        joint = hits / m
        cov = joint - np.outer(p[:, i], p[:, i])
        out[i] = (np.sum(p[:, i] * (1 - p[:, i])) + cov[off].sum()) / m
    return np.maximum(out, 0.0)


def majority_tails(dom: DominanceEstimate) -> np.ndarray:
    """``tau[k, i] = P(Binomial(m_ki, p_ki) > m_ki / 2)`` at the plug-in p."""
    n = dom.n_entities
    tau = np.empty((n, n))
    for k in range(n):
        for i in range(n):
            tau[k, i] = binom_tail_gt(int(dom.overlap[k, i]), MAJORITY, float(dom.p[k, i]))
    return tau


def ctpdp_bound_from_tails(tau: np.ndarray) -> np.ndarray:
    """Variance upper bound for each truncated score given its tail matrix.

    Cross terms use min(tau_s, tau_t), the largest possible joint probability.
    """
    n = tau.shape[0]
    off = ~np.eye(n, dtype=bool)
    out = np.empty(n)
    for i in range(n):
        t = tau[:, i]
        cross = np.minimum.outer(t, t) - np.outer(t, t)
        out[i] = np.sum(t * (1 - t)) + cross[off].sum()
    return np.maximum(out, 0.0)


def var_ctpdp_bound(dom: DominanceEstimate) -> np.ndarray:
    return ctpdp_bound_from_tails(majority_tails(dom))


def estimate(matrix: RankMatrix, criterion: Criterion) -> tuple[ScoreVector, np.ndarray]:
    """Point scores and their (bounded) variance estimates."""
    if criterion not in (Criterion.CPDP, Criterion.CTPDP):
        raise ValueError(f"confidence intervals are available for CPDP and CTPDP, not {criterion.value}")
    dom = dominance_matrix(matrix)
    scores = point_scores(matrix, criterion, dom)
    if criterion is Criterion.CPDP:
        return scores, var_cpdp(matrix, dom)
    return scores, var_ctpdp_bound(dom)


# -- intervals ---------------------------------------------------------------


@dataclass(frozen=True)
class ScoreIntervals:
    center: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    alpha: np.ndarray


def score_intervals(
    scores: np.ndarray | ScoreVector,
    variances: np.ndarray,
    alpha: float | np.ndarray,
    quantile: Quantile = Quantile.TWO_SIDED,
) -> ScoreIntervals:
    """Normal-approximation interval for each score at its own significance level."""
    center = np.asarray(scores.scores if isinstance(scores, ScoreVector) else scores, dtype=float)
    var = np.asarray(variances, dtype=float)
    if (var < 0).any():
        raise ValueError("variances must be non-negative")
    a = np.broadcast_to(np.asarray(alpha, dtype=float), center.shape)
    half = z_value(a, quantile) * np.sqrt(var)
    return ScoreIntervals(center, center - half, center + half, np.array(a))


def worst_best(lower: np.ndarray, upper: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ascending rank bounds from a family of score intervals.

    ``low_i = 1 + #{j != i : U_j <= L_i}`` and ``high_i = 1 + #{j != i : L_j <= U_i}``.
    """
    lo = np.asarray(lower, dtype=float)
    up = np.asarray(upper, dtype=float)
    off = ~np.eye(lo.size, dtype=bool)
    low = 1 + ((up[None, :] <= lo[:, None]) & off).sum(axis=1)
    high = 1 + ((lo[None, :] <= up[:, None]) & off).sum(axis=1)
    return low, high


def to_display(low: np.ndarray, high: np.ndarray, n: int, higher_is_better: bool) -> tuple[np.ndarray, np.ndarray]:
    if higher_is_better:
        return n + 1 - high, n + 1 - low
    return low, high


def simultaneous_bounds(scores: np.ndarray, variances: np.ndarray, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Ascending rank bounds with joint level at least 1 - alpha."""
    n = len(scores)
    var = np.maximum(variances, VARIANCE_FLOOR)
    ci = score_intervals(scores, var, alpha / n, Quantile.TWO_SIDED)
    return worst_best(ci.lower, ci.upper)


def individual_alphas(n: int, alpha: float, target: int, k: int) -> np.ndarray:
    """Split ``alpha`` so the target gets k*alpha/N and the rest share the remainder."""
    a = np.full(n, (n - k) * alpha / (n * (n - 1)))
    a[target] = k * alpha / n
    return a


def individual_bounds(
    scores: np.ndarray,
    variances: np.ndarray,
    alpha: float,
    target: int,
    quantile: Quantile = Quantile.CODE,
) -> tuple[int, int, int]:
    """Ascending bounds for one entity, minimising rank-interval width over the split.

    Returns ``(low, high, k)``; ties in width go to the smallest k.
    """
    n = len(scores)
    s = np.asarray(scores, dtype=float)
    sd = np.sqrt(np.maximum(variances, VARIANCE_FLOOR))
    best: tuple[int, int, int] | None = None
    for k in range(1, n):
        z = z_value(individual_alphas(n, alpha, target, k), quantile)
        lo, up = s - z * sd, s + z * sd
        others = np.arange(n) != target
        low = 1 + int(np.sum(up[others] <= lo[target]))
        high = 1 + int(np.sum(lo[others] <= up[target]))
        if best is None or high - low < best[1] - best[0]:
            best = (low, high, k)
    assert best is not None
    return best


@dataclass(frozen=True)
class RankInterval:
    entity: int
    lower: int
    """Best possible display rank (1 = best)."""
    upper: int
    """Worst possible display rank."""
    ascending: tuple[int, int]
    level: float
    mode: Mode
    criterion: Criterion
    split: int | None = None
    """Chosen k of the individual level split; None for simultaneous intervals."""

    @property
    def width(self) -> int:
        return self.upper - self.lower


@dataclass(frozen=True)
class RankCIReport:
    """Everything needed to tabulate one criterion's rank intervals."""

    entities: tuple[str, ...]
    criterion: Criterion
    mode: Mode
    level: float
    scores: ScoreVector
    variances: np.ndarray
    ranks: RankVector
    intervals: tuple[RankInterval, ...]


def _check_level(level: float) -> float:
    if not 0.0 < level < 1.0:
        raise ValueError(f"confidence level must lie in (0, 1), got {level!r}")
    return 1.0 - level


def simultaneous_rank_cis(matrix: RankMatrix, criterion: Criterion, level: float = 0.95) -> RankCIReport:
    alpha = _check_level(level)
    scores, var = estimate(matrix, criterion)
    n = matrix.n_entities
    low, high = simultaneous_bounds(scores.scores, var, alpha)
    d_lo, d_hi = to_display(low, high, n, matrix.higher_is_better)
    intervals = tuple(
        RankInterval(i, int(d_lo[i]), int(d_hi[i]), (int(low[i]), int(high[i])), level, Mode.SIMULTANEOUS, criterion)
        for i in range(n)
    )
    return RankCIReport(matrix.entities, criterion, Mode.SIMULTANEOUS, level, scores, var, scores_to_ranks(scores), intervals)


def individual_rank_ci(
    matrix: RankMatrix,
    criterion: Criterion,
    target: int,
    level: float = 0.95,
    quantile: Quantile = Quantile.CODE,
    *,
    _estimates: tuple[ScoreVector, np.ndarray] | None = None,
) -> RankInterval:
    alpha = _check_level(level)
    n = matrix.n_entities
    if not 0 <= target < n:
        raise IndexError(f"target {target} out of range for {n} entities")
    scores, var = estimate(matrix, criterion) if _estimates is None else _estimates
    low, high, k = individual_bounds(scores.scores, var, alpha, target, quantile)
    d_lo, d_hi = to_display(np.array([low]), np.array([high]), n, matrix.higher_is_better)
    return RankInterval(target, int(d_lo[0]), int(d_hi[0]), (low, high), level, Mode.INDIVIDUAL, criterion, k)


def individual_rank_cis(
    matrix: RankMatrix, criterion: Criterion, level: float = 0.95, quantile: Quantile = Quantile.CODE
) -> RankCIReport:
    est = estimate(matrix, criterion)
    intervals = tuple(
        individual_rank_ci(matrix, criterion, i, level, quantile, _estimates=est) for i in range(matrix.n_entities)
    )
    scores, var = est
    return RankCIReport(matrix.entities, criterion, Mode.INDIVIDUAL, level, scores, var, scores_to_ranks(scores), intervals)


def rank_cis(
    matrix: RankMatrix,
    criterion: Criterion,
    level: float = 0.95,
    mode: Mode = Mode.SIMULTANEOUS,
    quantile: Quantile = Quantile.CODE,
) -> RankCIReport:
    if mode is Mode.SIMULTANEOUS:
        return simultaneous_rank_cis(matrix, criterion, level)
    return individual_rank_cis(matrix, criterion, level, quantile)

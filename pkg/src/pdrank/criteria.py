"""Point rankings: CPDP and CTPDP scores plus Borda and Copeland baselines."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .dominance import DominanceEstimate, dominance_matrix
from .rankmatrix import RankMatrix, within_column_ranks

# Scores closer than this are treated as tied when ranking.
SCORE_TIE_TOL = 1e-9


class Criterion(enum.Enum):
    CPDP = "cpdp"
    CTPDP = "ctpdp"
    BORDA = "borda"
    COPELAND = "copeland"


class IncompleteDataError(ValueError):
    code = "E_INCOMPLETE"


@dataclass(frozen=True)
class ScoreVector:
    criterion: Criterion
    scores: np.ndarray
    higher_is_better: bool

    def __len__(self) -> int:
        return len(self.scores)


@dataclass(frozen=True)
class RankVector:
    display: np.ndarray
    """Competition ("min") ranks with 1 = best."""
    ascending: np.ndarray
    """Count of entities scoring at most as much, ``sum_k I(s_k <= s_i)``."""
    tie_groups: tuple[tuple[int, ...], ...]


def cpdp_scores(dom: DominanceEstimate, higher_is_better: bool) -> ScoreVector:
    """``s_i = sum_k p[k, i]``, the self term included."""
    return ScoreVector(Criterion.CPDP, dom.p.sum(axis=0), higher_is_better)


def ctpdp_scores(dom: DominanceEstimate, higher_is_better: bool) -> ScoreVector:
    """``t_i = #{k : p[k, i] > 1/2}``; exact halves are not counted."""
    return ScoreVector(Criterion.CTPDP, (dom.p > 0.5).sum(axis=0).astype(float), higher_is_better)


def scores_to_ranks(scores: ScoreVector, tol: float = SCORE_TIE_TOL) -> RankVector:
    s = np.asarray(scores.scores, dtype=float)
    diff = s[:, None] - s[None, :]  # diff[i, j] = s_i - s_j
    ascending = (diff >= -tol).sum(axis=1)
    if scores.higher_is_better:
        strictly_better = (diff < -tol).sum(axis=1)
    else:
        strictly_better = (diff > tol).sum(axis=1)
    display = 1 + strictly_better

    groups: dict[int, list[int]] = {}
    for idx, r in enumerate(display):
        groups.setdefault(int(r), []).append(idx)
    tie_groups = tuple(tuple(g) for _, g in sorted(groups.items()))
    return RankVector(display.astype(int), ascending.astype(int), tie_groups)


def point_scores(matrix: RankMatrix, criterion: Criterion, dom: DominanceEstimate | None = None) -> ScoreVector:
    if criterion is Criterion.BORDA:
        return borda_scores(matrix)
    if criterion is Criterion.COPELAND:
        return copeland_scores(matrix)
    dom = dominance_matrix(matrix) if dom is None else dom
    if criterion is Criterion.CPDP:
        return cpdp_scores(dom, matrix.higher_is_better)
    return ctpdp_scores(dom, matrix.higher_is_better)


def point_ranks(matrix: RankMatrix, criterion: Criterion) -> RankVector:
    return scores_to_ranks(point_scores(matrix, criterion))


def _require_complete(matrix: RankMatrix, method: str) -> None:
    if not matrix.is_complete:
        raise IncompleteDataError(f"{method} is only defined here for complete rank matrices")


def borda_scores(matrix: RankMatrix) -> ScoreVector:
    """Sum over rankers of each entity's ascending within-column rank."""
    _require_complete(matrix, "Borda count")
    ranks = np.column_stack([within_column_ranks(matrix, j) for j in range(matrix.n_rankers)])
    return ScoreVector(Criterion.BORDA, ranks.sum(axis=1), matrix.higher_is_better)


def copeland_scores(matrix: RankMatrix) -> ScoreVector:
    """Pairwise majority wins, with half a point for an even split.

    Larger is always better for the returned scores.
    """
    _require_complete(matrix, "Copeland")
    x = matrix.values
    m = matrix.n_rankers
    if matrix.higher_is_better:
        beats = (x[:, None, :] > x[None, :, :]).sum(axis=2)
    else:
        beats = (x[:, None, :] < x[None, :, :]).sum(axis=2)
    # beats[i, k] = number of rankers preferring i to k
    score = (2 * beats > m).sum(axis=1) + 0.5 * ((2 * beats == m) & ~np.eye(len(x), dtype=bool)).sum(axis=1)
    return ScoreVector(Criterion.COPELAND, score.astype(float), True)


def borda_ranks(matrix: RankMatrix) -> RankVector:
    return scores_to_ranks(borda_scores(matrix))


def copeland_ranks(matrix: RankMatrix) -> RankVector:
    return scores_to_ranks(copeland_scores(matrix))

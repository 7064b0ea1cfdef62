"""Pairwise and joint dominance probability estimates.

``p[k, i]`` estimates P(X_k <= X_i) from the rankers that observed both
entities, dividing by that overlap count rather than by the number of rankers.
Values are compared exactly as stored, so the estimate does not depend on the
matrix orientation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rankmatrix import RankMatrix


class NoCommonRankerError(ValueError):
    code = "E_NO_COMMON_RANKER"

    def __init__(self, pairs: list[tuple[int, int]], labels: tuple[str, ...] | None = None):
        self.pairs = pairs
        if labels is not None:
            shown = ", ".join(f"({labels[k]}, {labels[i]})" for k, i in pairs[:10])
        else:
            shown = ", ".join(map(str, pairs[:10]))
        more = "" if len(pairs) <= 10 else f" and {len(pairs) - 10} more"
        super().__init__(f"no ranker observed both entities of pair(s) {shown}{more}")


@dataclass(frozen=True)
class DominanceEstimate:
    p: np.ndarray
    """(N, N) estimates of P(X_k <= X_i), diagonal fixed at 1."""
    overlap: np.ndarray
    """(N, N) symmetric counts of rankers observing both k and i."""
    wins: np.ndarray
    """(N, N) counts of common rankers with X_k <= X_i."""

    @property
    def n_entities(self) -> int:
        return self.p.shape[0]


def _comparisons(matrix: RankMatrix) -> np.ndarray:
    """Boolean (N, N, m) array of observed ``X[k, l] <= X[i, l]`` events."""
    x = matrix.values
    obs = matrix.observed
    both = obs[:, None, :] & obs[None, :, :]
    with np.errstate(invalid="ignore"):
        le = x[:, None, :] <= x[None, :, :]
    return le & both


def pairwise_prob(matrix: RankMatrix, k: int, i: int) -> tuple[float, int]:
    """Estimate P(X_k <= X_i) and return it with the overlap count."""
    obs = matrix.observed
    if k == i:
        return 1.0, int(obs[i].sum())
    both = obs[k] & obs[i]
    m_ki = int(both.sum())
    if m_ki == 0:
        raise NoCommonRankerError([(k, i)], matrix.entities)
    wins = int((matrix.values[k, both] <= matrix.values[i, both]).sum())
    return wins / m_ki, m_ki


def dominance_matrix(matrix: RankMatrix) -> DominanceEstimate:
    le = _comparisons(matrix)
    wins = le.sum(axis=2)
    obs = matrix.observed.astype(np.int64)
    overlap = obs @ obs.T
    n = matrix.n_entities
    off = ~np.eye(n, dtype=bool)
    empty = np.argwhere((overlap == 0) & off)
    if empty.size:
        pairs = [(int(k), int(i)) for k, i in empty if k < i]
        raise NoCommonRankerError(pairs, matrix.entities)
    p = np.divide(wins, overlap, out=np.zeros((n, n)), where=overlap > 0)
    np.fill_diagonal(p, 1.0)
    return DominanceEstimate(p, overlap, wins)


def joint_prob(matrix: RankMatrix, s: int, t: int, i: int) -> tuple[float, int]:
    """Estimate P(X_s <= X_i and X_t <= X_i) on columns observing s, t and i."""
    if s == t:
        raise ValueError("joint_prob needs two distinct entities s != t")
    obs = matrix.observed
    cols = obs[s] & obs[t] & obs[i]
    n = int(cols.sum())
    if n == 0:
        raise NoCommonRankerError([(s, i), (t, i)], matrix.entities)
    x = matrix.values
    hits = (x[s, cols] <= x[i, cols]) & (x[t, cols] <= x[i, cols])
    return float(hits.mean()), n


def joint_counts(matrix: RankMatrix, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Joint event counts and triple-overlap counts for target ``i``.

    Returns ``(hits, overlap)`` of shape (N, N) where ``hits[s, t]`` counts
    columns with both ``X_s <= X_i`` and ``X_t <= X_i`` and ``overlap[s, t]``
    counts columns observed in rows s, t and i.
    """
    x = matrix.values
    obs = matrix.observed
    with np.errstate(invalid="ignore"):
        below = (x <= x[i]) & obs & obs[i]
    b = below.astype(np.int64)
    seen = (obs & obs[i]).astype(np.int64)
    return b @ b.T, seen @ seen.T

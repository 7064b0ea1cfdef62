"""Observed rank matrices with per-cell missingness.

Rows are entities and columns are rankers. A missing cell is stored as NaN.
Each column must be a strict ordering of the entities that ranker observed,
so observed values within a column are distinct positive integers.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np


class Orientation(enum.Enum):
    LOWER_IS_BETTER = "lower-better"
    HIGHER_IS_BETTER = "higher-better"


class RankMatrixError(ValueError):
    """Raised when a matrix violates the rank-matrix invariants.

    ``violations`` holds one ``(code, message)`` tuple per problem found.
    """

    def __init__(self, violations: list[tuple[str, str]]):
        self.violations = violations
        super().__init__("; ".join(msg for _, msg in violations))

    @property
    def code(self) -> str:
        return self.violations[0][0]


@dataclass(frozen=True, eq=False)
class RankMatrix:
    entities: tuple[str, ...]
    values: np.ndarray
    orientation: Orientation = Orientation.LOWER_IS_BETTER
    rankers: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "entities", tuple(str(e) for e in self.entities))
        if self.rankers is None:
            names = tuple(f"r{j + 1}" for j in range(values.shape[1] if values.ndim == 2 else 0))
            object.__setattr__(self, "rankers", names)
        else:
            object.__setattr__(self, "rankers", tuple(str(r) for r in self.rankers))

    @classmethod
    def from_rows(
        cls,
        entities: Sequence[str],
        rows: Sequence[Sequence[float | None]],
        orientation: Orientation = Orientation.LOWER_IS_BETTER,
        rankers: Sequence[str] | None = None,
    ) -> RankMatrix:
        values = np.array([[np.nan if v is None else v for v in row] for row in rows], dtype=float)
        return validate(cls(tuple(entities), values, orientation, None if rankers is None else tuple(rankers)))

    @property
    def n_entities(self) -> int:
        return self.values.shape[0]

    @property
    def n_rankers(self) -> int:
        return self.values.shape[1]

    @cached_property
    def observed(self) -> np.ndarray:
        mask = ~np.isnan(self.values)
        mask.setflags(write=False)
        return mask

    @property
    def is_complete(self) -> bool:
        return bool(self.observed.all())

    @property
    def higher_is_better(self) -> bool:
        return self.orientation is Orientation.HIGHER_IS_BETTER

    def with_values(self, values: np.ndarray) -> RankMatrix:
        return RankMatrix(self.entities, values, self.orientation, self.rankers)


def validate(matrix: RankMatrix) -> RankMatrix:
    """Return ``matrix`` unchanged if it is a valid rank matrix, else raise.

    Every violation is collected before raising, so the error lists all of them.
    """
    values = matrix.values
    problems: list[tuple[str, str]] = []
    if values.ndim != 2:
        raise RankMatrixError([("E_SHAPE", f"rank matrix must be 2-D, got shape {values.shape}")])
    n, m = values.shape
    if n < 2:
        problems.append(("E_SHAPE", f"need at least 2 entities, got {n}"))
    if m < 1:
        problems.append(("E_SHAPE", "need at least 1 ranker"))
    if len(matrix.entities) != n:
        problems.append(("E_SHAPE", f"{len(matrix.entities)} labels for {n} rows"))
    if len(matrix.rankers) != m:
        problems.append(("E_SHAPE", f"{len(matrix.rankers)} ranker names for {m} columns"))
    seen: set[str] = set()
    for label in matrix.entities:
        if label in seen:
            problems.append(("E_DUPLICATE_LABEL", f"duplicate entity label {label!r}"))
        seen.add(label)

    if np.isinf(values).any():
        problems.append(("E_NONFINITE", "rank values must be finite"))
    for j in range(m):
        name = matrix.rankers[j] if j < len(matrix.rankers) else f"column {j + 1}"
        col = values[:, j]
        obs = col[~np.isnan(col)]
        if obs.size == 0:
            problems.append(("E_EMPTY_COLUMN", f"ranker {name!r} has no observed ranks"))
            continue
        bad = obs[(obs <= 0) | (obs != np.round(obs))]
        for v in bad:
            problems.append(("E_NONPOSITIVE", f"ranker {name!r} has invalid rank value {v:g}"))
        uniq, counts = np.unique(obs, return_counts=True)
        for v in uniq[counts > 1]:
            problems.append(("E_DUPLICATE_RANK", f"ranker {name!r} uses rank {v:g} more than once"))
    if problems:
        raise RankMatrixError(problems)
    return matrix


def within_column_ranks(matrix: RankMatrix, column: int) -> np.ndarray:
    """Ascending ranks 1..#observed of the observed entries of one column.

    Missing entities get NaN. The smallest observed value gets rank 1.
    """
    col = matrix.values[:, column]
    out = np.full(col.shape, np.nan)
    obs = ~np.isnan(col)
    # Ties are broken by entity index; validated ballots never contain any.
    order = np.argsort(col[obs], kind="stable")
    ranks = np.empty(order.size)
    ranks[order] = np.arange(1, order.size + 1)
    out[obs] = ranks
    return out


def rerank(matrix: RankMatrix) -> RankMatrix:
    """Replace every column by its within-column ranks."""
    cols = [within_column_ranks(matrix, j) for j in range(matrix.n_rankers)]
    return matrix.with_values(np.column_stack(cols))


def canonicalize(matrix: RankMatrix) -> RankMatrix:
    """Express ``matrix`` in higher-is-better orientation.

    Lower-is-better columns are mapped to ``#observed + 1 - rank`` so that the
    comparison order within each column flips and values stay positive integers.
    """
    if matrix.higher_is_better:
        return matrix
    ranked = rerank(matrix).values
    flipped = matrix.observed.sum(axis=0) + 1 - ranked
    return RankMatrix(matrix.entities, flipped, Orientation.HIGHER_IS_BETTER, matrix.rankers)


@dataclass(frozen=True)
class MissingIndex:
    """Bookkeeping of which rankers observed which entities."""

    observed: np.ndarray
    missing_rows: tuple[frozenset[int], ...] = field(repr=False)
    overlap: np.ndarray = field(repr=False)

    def pair_missing_columns(self, k: int, i: int) -> frozenset[int]:
        """Columns with a missing cell in row ``k`` or row ``i``."""
        both = self.observed[k] & self.observed[i]
        return frozenset(np.flatnonzero(~both).tolist())

    def triple_overlap(self, s: int, t: int, i: int) -> int:
        """Number of columns observed in rows ``s``, ``t`` and ``i`` at once."""
        return int((self.observed[s] & self.observed[t] & self.observed[i]).sum())


def missing_index(matrix: RankMatrix) -> MissingIndex:
    obs = matrix.observed
    missing_rows = tuple(frozenset(np.flatnonzero(~obs[:, j]).tolist()) for j in range(matrix.n_rankers))
    o = obs.astype(np.int64)
    return MissingIndex(obs, missing_rows, o @ o.T)

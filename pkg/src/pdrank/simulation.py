"""Normal latent-score scenarios, their exact truth, and coverage experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .criteria import Criterion, ScoreVector, cpdp_scores, ctpdp_scores, scores_to_ranks
from .dominance import dominance_matrix
from .inference import (
    MAJORITY,
    Mode,
    Quantile,
    ctpdp_bound_from_tails,
    individual_bounds,
    simultaneous_bounds,
    var_cpdp,
    var_ctpdp_bound,
)
from .numerics import binom_tail_gt, norm_cdf
from .rankmatrix import Orientation, RankMatrix

# Re-draw budget for missingness patterns that leave a pair without overlap.
MAX_MISSINGNESS_DRAWS = 1000


@dataclass(frozen=True)
class Missingness:
    row_fraction: float
    max_cell_fraction: float

    def __post_init__(self):
        for name in ("row_fraction", "max_cell_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class Scenario:
    means: tuple[float, ...]
    variances: tuple[float, ...]
    m: int
    missingness: Missingness | None = None
    seed: int = 0
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "means", tuple(float(v) for v in self.means))
        object.__setattr__(self, "variances", tuple(float(v) for v in self.variances))
        if len(self.means) != len(self.variances):
            raise ValueError("means and variances must have the same length")
        if len(self.means) < 2:
            raise ValueError("a scenario needs at least 2 entities")
        if any(v <= 0 for v in self.variances):
            raise ValueError("variances must be positive")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    @property
    def n(self) -> int:
        return len(self.means)

    def with_m(self, m: int) -> Scenario:
        return replace(self, m=m)


def benchmark_case(case: int, m: int = 30, seed: int = 0) -> Scenario:
    """The four benchmark scenarios with N = 10 entities and means 1..10."""
    means = tuple(range(1, 11))
    equal = (1.0,) * 10
    unequal = (9.0,) + (1.0,) * 8 + (16.0,)
    table = {
        1: (equal, None),
        2: (equal, Missingness(0.4, 0.4)),
        3: (unequal, None),
        4: (unequal, Missingness(0.4, 0.3)),
    }
    if case not in table:
        raise ValueError(f"case must be 1, 2, 3 or 4, got {case}")
    variances, miss = table[case]
    return Scenario(means, variances, m, miss, seed, name=f"case{case}")


# -- truth -------------------------------------------------------------------


def true_pairwise_prob_normal(mu_k: float, var_k: float, mu_i: float, var_i: float) -> float:
    """P(X_k <= X_i) for independent normals."""
    if var_k <= 0 or var_i <= 0:
        raise ValueError("variances must be positive")
    return norm_cdf((mu_i - mu_k) / math.sqrt(var_i + var_k))


def true_joint_prob_normal(scenario: Scenario, s: int, t: int, i: int, nodes: int = 96) -> float:
    """P(X_s <= X_i and X_t <= X_i) by Gauss-Hermite quadrature over X_i."""
    x, w = np.polynomial.hermite_e.hermegauss(nodes)
    mu, var = np.array(scenario.means), np.array(scenario.variances)
    xi = mu[i] + math.sqrt(var[i]) * x
    cdf = np.vectorize(norm_cdf)
    fs = cdf((xi - mu[s]) / math.sqrt(var[s]))
    ft = cdf((xi - mu[t]) / math.sqrt(var[t]))
    return float(np.sum(w * fs * ft) / math.sqrt(2 * math.pi))


@dataclass(frozen=True)
class TruthTable:
    p: np.ndarray
    """True P(X_k <= X_i), diagonal 1."""
    cpdp: np.ndarray
    ctpdp: np.ndarray
    cpdp_rank: np.ndarray
    """Ascending ranks, 1 = smallest score."""
    ctpdp_rank: np.ndarray
    mean_rank: np.ndarray

    def ranks(self, criterion: Criterion) -> np.ndarray:
        return self.cpdp_rank if criterion is Criterion.CPDP else self.ctpdp_rank


def true_pairwise_matrix(scenario: Scenario) -> np.ndarray:
    n = scenario.n
    p = np.ones((n, n))
    for k in range(n):
        for i in range(n):
            if k != i:
                p[k, i] = true_pairwise_prob_normal(scenario.means[k], scenario.variances[k], scenario.means[i], scenario.variances[i])
    return p


def true_scores(scenario: Scenario) -> TruthTable:
    p = true_pairwise_matrix(scenario)
    s = p.sum(axis=0)
    t = (p > 0.5).sum(axis=0).astype(float)
    cp = scores_to_ranks(ScoreVector(Criterion.CPDP, s, True)).ascending
    ct = scores_to_ranks(ScoreVector(Criterion.CTPDP, t, True)).ascending
    mr = scores_to_ranks(ScoreVector(Criterion.CPDP, np.array(scenario.means), True)).ascending
    return TruthTable(p, s, t, cp, ct, mr)


def true_cpdp_variance(scenario: Scenario, m: int | None = None) -> np.ndarray:
    """Exact variance of the complete-data CPDP estimate for ``m`` rankers."""
    m = scenario.m if m is None else m
    p = true_pairwise_matrix(scenario)
    n = scenario.n
    out = np.empty(n)
    for i in range(n):
        total = float(np.sum(p[:, i] * (1 - p[:, i])))
        for s in range(n):
            for t in range(n):
                if s == t or s == i or t == i:
                    continue
                total += true_joint_prob_normal(scenario, s, t, i) - p[s, i] * p[t, i]
        out[i] = total / m
    return out


def true_ctpdp_bound(scenario: Scenario, m: int | None = None) -> np.ndarray:
    """Variance bound for the CTPDP estimate evaluated at the true probabilities."""
    m = scenario.m if m is None else m
    p = true_pairwise_matrix(scenario)
    tau = np.vectorize(lambda q: binom_tail_gt(m, MAJORITY, q))(p)
    return ctpdp_bound_from_tails(tau)


# -- data generation ---------------------------------------------------------


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    """Independent stream for one replication, keyed by (seed, rep)."""
    return np.random.default_rng(np.random.SeedSequence([seed, rep]))


def _column_ranks(x: np.ndarray) -> np.ndarray:
    # Ascending ranks per column; exact ties (probability zero) go by row index.
    order = np.argsort(x, axis=0, kind="stable")
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(1, x.shape[0] + 1)[:, None], axis=0)
    return ranks


def _inject_missing(ranks: np.ndarray, miss: Missingness, rng: np.random.Generator) -> np.ndarray:
    n, m = ranks.shape
    n_rows = math.ceil(miss.row_fraction * n - 1e-12)
    max_cells = math.floor(miss.max_cell_fraction * m + 1e-12)
    if n_rows == 0 or max_cells == 0:
        return ranks.astype(float)
    for _ in range(MAX_MISSINGNESS_DRAWS):
        obs = np.ones((n, m), dtype=bool)
        for row in rng.choice(n, size=n_rows, replace=False):
            count = rng.integers(1, max_cells + 1)
            obs[row, rng.choice(m, size=count, replace=False)] = False
        o = obs.astype(np.int64)
        if obs.any(axis=0).all() and (o @ o.T > 0).all():
            break
    else:
        raise RuntimeError("could not draw a missingness pattern with every pair overlapping")
    # Observed entries are re-ranked among the observed rows of each column.
    out = np.full((n, m), np.nan)
    for j in range(m):
        keep = obs[:, j]
        col = ranks[keep, j]
        out[keep, j] = np.argsort(np.argsort(col, kind="stable"), kind="stable") + 1
    return out


def generate(scenario: Scenario, rng: np.random.Generator | None = None) -> RankMatrix:
    """Draw one rank matrix; uses a fresh generator seeded from the scenario if none is given."""
    rng = np.random.default_rng(scenario.seed) if rng is None else rng
    n, m = scenario.n, scenario.m
    mu = np.array(scenario.means)[:, None]
    sd = np.sqrt(np.array(scenario.variances))[:, None]
    x = mu + sd * rng.standard_normal((n, m))
    ranks = _column_ranks(x)
    values = ranks.astype(float) if scenario.missingness is None else _inject_missing(ranks, scenario.missingness, rng)
    entities = tuple(f"X{i + 1}" for i in range(n))
    return RankMatrix(entities, values, Orientation.HIGHER_IS_BETTER)


# -- coverage ----------------------------------------------------------------


@dataclass(frozen=True)
class CoverageReport:
    scenario: str
    criterion: Criterion
    mode: Mode
    m: int
    reps: int
    level: float
    coverage: float
    per_entity: tuple[float, ...] = field(default=())
    """Individual mode only: coverage of each entity's own interval."""

    @property
    def mc_stderr(self) -> float:
        c = self.coverage
        return math.sqrt(c * (1 - c) / self.reps)

    @property
    def band(self) -> tuple[float, float]:
        """Coverage plus or minus two Monte Carlo standard errors."""
        return self.coverage - 2 * self.mc_stderr, self.coverage + 2 * self.mc_stderr


def _estimate(matrix: RankMatrix, criterion: Criterion) -> tuple[np.ndarray, np.ndarray]:
    dom = dominance_matrix(matrix)
    if criterion is Criterion.CPDP:
        return cpdp_scores(dom, True).scores, var_cpdp(matrix, dom)
    return ctpdp_scores(dom, True).scores, var_ctpdp_bound(dom)


def coverage_experiment(
    scenario: Scenario,
    reps: int = 1000,
    level: float = 0.95,
    mode: Mode = Mode.SIMULTANEOUS,
    criterion: Criterion = Criterion.CPDP,
    quantile: Quantile = Quantile.CODE,
) -> CoverageReport:
    """Fraction of replications whose rank intervals contain the true ranks.

    Simultaneous mode counts a replication as covered only if every entity's
    interval contains its true rank. Individual mode reports the average of
    the per-entity coverages.
    """
    if reps < 1:
        raise ValueError("reps must be at least 1")
    truth = true_scores(scenario)
    scores = truth.cpdp if criterion is Criterion.CPDP else truth.ctpdp
    if len(np.unique(np.round(scores, 12))) != scenario.n:
        raise ValueError("true scores are tied; rank coverage is ill-defined")
    true_rank = truth.ranks(criterion)
    alpha = 1.0 - level
    n = scenario.n

    hits = np.zeros(n)
    joint = 0
    for rep in range(reps):
        matrix = generate(scenario, replication_rng(scenario.seed, rep))
        est, var = _estimate(matrix, criterion)
        if mode is Mode.SIMULTANEOUS:
            low, high = simultaneous_bounds(est, var, alpha)
            inside = (low <= true_rank) & (true_rank <= high)
            joint += bool(inside.all())
            hits += inside
        else:
            for i in range(n):
                low, high, _ = individual_bounds(est, var, alpha, i, quantile)
                hits[i] += low <= true_rank[i] <= high
    per_entity = tuple(float(h / reps) for h in hits)
    coverage = joint / reps if mode is Mode.SIMULTANEOUS else float(np.mean(per_entity))
    return CoverageReport(
        scenario.name,
        criterion,
        mode,
        scenario.m,
        reps,
        level,
        coverage,
        per_entity if mode is Mode.INDIVIDUAL else (),
    )


def coverage_sweep(
    scenario: Scenario,
    ms: list[int],
    reps: int = 1000,
    level: float = 0.95,
    mode: Mode = Mode.SIMULTANEOUS,
    criterion: Criterion = Criterion.CPDP,
    quantile: Quantile = Quantile.CODE,
) -> list[CoverageReport]:
    return [coverage_experiment(scenario.with_m(m), reps, level, mode, criterion, quantile) for m in ms]

"""Ranking by pairwise dominance probabilities, with confidence intervals for ranks."""

from .criteria import (
    Criterion,
    RankVector,
    ScoreVector,
    borda_ranks,
    copeland_ranks,
    cpdp_scores,
    ctpdp_scores,
    point_ranks,
    scores_to_ranks,
)
from .dominance import (
    DominanceEstimate,
    NoCommonRankerError,
    dominance_matrix,
    joint_prob,
    pairwise_prob,
)
from .inference import (
    Mode,
    Quantile,
    RankInterval,
    individual_rank_ci,
    rank_cis,
    simultaneous_rank_cis,
    var_cpdp,
    var_ctpdp_bound,
    worst_best,
)
from .rankmatrix import (
    Orientation,
    RankMatrix,
    RankMatrixError,
    canonicalize,
    validate,
    within_column_ranks,
)
from .report import load_nfl, parse_input, sse
from .simulation import (
    Scenario,
    benchmark_case,
    coverage_experiment,
    generate,
    true_scores,
)

__all__ = [
    "Criterion",
    "DominanceEstimate",
    "Mode",
    "NoCommonRankerError",
    "Orientation",
    "Quantile",
    "RankInterval",
    "RankMatrix",
    "RankMatrixError",
    "RankVector",
    "Scenario",
    "ScoreVector",
    "benchmark_case",
    "borda_ranks",
    "canonicalize",
    "copeland_ranks",
    "coverage_experiment",
    "cpdp_scores",
    "ctpdp_scores",
    "dominance_matrix",
    "generate",
    "individual_rank_ci",
    "joint_prob",
    "load_nfl",
    "pairwise_prob",
    "parse_input",
    "point_ranks",
    "rank_cis",
    "scores_to_ranks",
    "simultaneous_rank_cis",
    "sse",
    "true_scores",
    "validate",
    "var_cpdp",
    "var_ctpdp_bound",
    "within_column_ranks",
    "worst_best",
]

__version__ = "0.1.0"

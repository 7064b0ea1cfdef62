"""Normal distribution and binomial tail helpers used by the interval code."""

from __future__ import annotations

import math
from functools import lru_cache
from statistics import NormalDist

_STD_NORMAL = NormalDist()


def norm_cdf(x: float) -> float:
    """Standard normal CDF, accurate in both tails."""
    if not math.isfinite(x):
        raise ValueError(f"norm_cdf requires a finite argument, got {x!r}")
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def norm_quantile(p: float) -> float:
    """Inverse of :func:`norm_cdf` on the open interval (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"norm_quantile requires 0 < p < 1, got {p!r}")
    return _STD_NORMAL.inv_cdf(p)


def binom_tail_gt(trials: int, threshold_fraction: float, success_prob: float) -> float:
    """P(B > trials * threshold_fraction) for B ~ Binomial(trials, success_prob).

    The inequality is strict: when ``trials * threshold_fraction`` is an
    integer the boundary term is excluded.
    """
    if trials < 0 or int(trials) != trials:
        raise ValueError(f"trials must be a non-negative integer, got {trials!r}")
    if not 0.0 < threshold_fraction < 1.0:
        raise ValueError(f"threshold_fraction must lie in (0, 1), got {threshold_fraction!r}")
    if not 0.0 <= success_prob <= 1.0:
        raise ValueError(f"success_prob must lie in [0, 1], got {success_prob!r}")
    return _binom_tail_gt(int(trials), float(threshold_fraction), float(success_prob))


@lru_cache(maxsize=65536)
def _binom_tail_gt(n: int, q: float, p: float) -> float:
    first = math.floor(n * q) + 1
    if first > n or p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    # Unnormalised pmf by the ratio recurrence, starting at the mode with weight 1.
    # Normalising by the full sum avoids lgamma round-off for large n.
    mode = min(n, int((n + 1) * p))
    odds = p / (1.0 - p)
    w = [0.0] * (n + 1)
    w[mode] = 1.0
    for s in range(mode, n):
        w[s + 1] = w[s] * (n - s) / (s + 1) * odds
        if w[s + 1] == 0.0:
            break
    for s in range(mode, 0, -1):
        w[s - 1] = w[s] * s / (n - s + 1) / odds
        if w[s - 1] == 0.0:
            break
    total = math.fsum(w)
    return min(1.0, math.fsum(w[first:]) / total)

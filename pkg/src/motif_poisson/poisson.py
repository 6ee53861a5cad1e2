"""Poisson reference distribution and total-variation utilities."""

from __future__ import annotations

import math
from typing import Mapping

from .errors import UnnormalizedHistogram

_HIST_TOL = 1e-9


def poisson_pmf(lam: float, k: int) -> float:
    """P(X = k) for X ~ Poisson(lam), evaluated in log space so large
    means and far-tail k stay finite."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if k < 0:
        raise ValueError("k must be >= 0")
    if lam == 0.0:
        return 1.0 if k == 0 else 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


def poisson_tail(lam: float, k: int) -> float:
    """P(X > k): one minus the CDF, with compensated summation."""
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if k < 0:
        raise ValueError("k must be >= 0")
    cdf = math.fsum(poisson_pmf(lam, j) for j in range(k + 1))
    return max(0.0, 1.0 - cdf)


def tv_distance_empirical(hist: Mapping[int, float], lam: float) -> float:
    """Total variation distance between an empirical integer law and
    Poisson(lam), as half the L1 difference.

    The comparison runs over ``k <= K`` with ``K`` far enough past both the
    largest observed count and the Poisson bulk that the remaining Poisson
    mass is handled by a single tail term (any histogram mass above K would
    be added likewise, but K always clears the observed support).
    """
    total = math.fsum(hist.values())
    if abs(total - 1.0) > _HIST_TOL:
        raise UnnormalizedHistogram(f"frequencies sum to {total!r}, not 1")
    if any(k < 0 for k in hist):
        raise UnnormalizedHistogram("histogram has negative counts as keys")
    max_obs = max(hist.keys(), default=0)
    cutoff = max_obs + math.ceil(10 + 10 * lam)
    body = math.fsum(
        abs(hist.get(k, 0.0) - poisson_pmf(lam, k)) for k in range(cutoff + 1)
    )
    above = math.fsum(f for k, f in hist.items() if k > cutoff)
    return 0.5 * (body + poisson_tail(lam, cutoff) + above)

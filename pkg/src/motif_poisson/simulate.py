"""Seeded replicate ensembles: empirical law of the count vs its Poisson
reference.

Every replicate r draws its graph from an independent generator keyed by
(seed, r), so the ensemble is reproducible replicate-by-replicate and the
result is byte-identical no matter how replicates are spread over worker
threads; accumulation always happens in replicate order.
"""

from __future__ import annotations

import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bounds import (
    BoundReport,
    bound_graphon,
    bound_sbm,
    lambda_value,
    mu_graphon,
    mu_sbm,
)
from .counting import count_copies
from .errors import InvalidParams, NotStrictlyBalanced
from .models import (
    GraphonSpec,
    SampledGraph,
    SbmParams,
    sample_graphon,
    sample_sbm,
    substream_seed,
)
from .motif import Motif
from .poisson import tv_distance_empirical

_BOOTSTRAP_RESAMPLES = 200
_BOOTSTRAP_TAG = 0x0B005EED  # offset separating bootstrap from replicate seeds


@dataclass(frozen=True)
class SimulationPlan:
    """One ensemble: a model, a motif, a graph size, a replicate budget and
    the master seed that determines everything."""

    model: SbmParams | GraphonSpec
    motif: Motif
    n: int
    replicates: int
    seed: int
    quad_points: int = 64

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidParams("replicates must be >= 1")
        if self.n < self.motif.vertex_count:
            raise InvalidParams("n must be at least the motif's vertex count")


@dataclass(frozen=True)
class SimulationSummary:
    """Empirical results of one plan.

    ``theoretical_bound`` is None when the motif is not strictly balanced
    (simulation is still meaningful, the bound just does not apply).
    ``wall_time`` is informational and excluded from deterministic output.
    """

    histogram: Mapping[int, float]
    sample_mean: float
    sample_variance: float
    empirical_tv: float
    tv_standard_error: float
    lam: float
    theoretical_bound: float | None
    bound_report: BoundReport | None
    replicates: int
    wall_time: float

    def to_dict(self, deterministic: bool = True) -> dict:
        out = {
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "sample_mean": self.sample_mean,
            "sample_variance": self.sample_variance,
            "empirical_tv": self.empirical_tv,
            "tv_standard_error": self.tv_standard_error,
            "lambda": self.lam,
            "theoretical_bound": self.theoretical_bound,
            "bound": self.bound_report.to_dict() if self.bound_report else None,
            "replicates": self.replicates,
        }
        if not deterministic:
            out["wall_time"] = self.wall_time
        return out


def _sample(model, n: int, seed: int) -> SampledGraph:
    if isinstance(model, SbmParams):
        return sample_sbm(model, n, seed)
    return sample_graphon(model, n, seed)


def _replicate_count(plan: SimulationPlan, r: int) -> int:
    graph = _sample(plan.model, plan.n, substream_seed(plan.seed, r))
    return count_copies(graph, plan.motif).count


def _model_lambda(plan: SimulationPlan) -> float:
    if isinstance(plan.model, SbmParams):
        mu = mu_sbm(plan.model, plan.motif)
    else:
        mu = mu_graphon(plan.model, plan.motif, plan.quad_points)
    return lambda_value(plan.motif, plan.n, mu)


def _model_bound(plan: SimulationPlan) -> BoundReport | None:
    try:
        if isinstance(plan.model, SbmParams):
            return bound_sbm(plan.model, plan.motif, plan.n)
        return bound_graphon(plan.model, plan.motif, plan.n, plan.quad_points)
    except NotStrictlyBalanced:
        return None


def tv_standard_error(
    histogram: Mapping[int, float],
    replicates: int,
    lam: float,
    seed: int,
    resamples: int = _BOOTSTRAP_RESAMPLES,
) -> float:
    """Bootstrap standard error of the empirical TV statistic: resample the
    histogram multinomially at the observed replicate count and take the
    standard deviation of the recomputed statistic.  Seeded, hence
    reproducible."""
    if replicates < 2:
        return 0.0
    keys = sorted(histogram)
    probs = np.asarray([histogram[k] for k in keys], dtype=float)
    probs = probs / probs.sum()
    rng = np.random.Generator(np.random.Philox(key=seed))
    draws = rng.multinomial(replicates, probs, size=resamples)
    tvs = np.empty(resamples)
    for i in range(resamples):
        resampled = {
            k: cnt / replicates for k, cnt in zip(keys, draws[i]) if cnt > 0
        }
        tvs[i] = tv_distance_empirical(resampled, lam)
    return float(tvs.std(ddof=1))


def run(plan: SimulationPlan, threads: int = 1) -> SimulationSummary:
    """Run the ensemble and assemble the summary.

    Counts accumulate in replicate-index order whatever ``threads`` is, so
    the summary (wall time aside) is a pure function of the plan.
    """
    start = time.perf_counter()
    indices = range(plan.replicates)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda r: _replicate_count(plan, r), indices))
    else:
        counts = [_replicate_count(plan, r) for r in indices]

    r_total = plan.replicates
    histogram: dict[int, float] = {}
    for w in counts:
        histogram[w] = histogram.get(w, 0.0) + 1.0
    histogram = {k: v / r_total for k, v in sorted(histogram.items())}

    mean = math.fsum(counts) / r_total
    if r_total > 1:
        var = math.fsum((w - mean) ** 2 for w in counts) / (r_total - 1)
    else:
        var = 0.0

    lam = _model_lambda(plan)
    report = _model_bound(plan)
    tv = tv_distance_empirical(histogram, lam)
    se = tv_standard_error(
        histogram,
        r_total,
        lam,
        substream_seed(plan.seed, _BOOTSTRAP_TAG + r_total),
    )
    return SimulationSummary(
        histogram=histogram,
        sample_mean=mean,
        sample_variance=var,
        empirical_tv=tv,
        tv_standard_error=se,
        lam=lam,
        theoretical_bound=report.bound if report else None,
        bound_report=report,
        replicates=r_total,
        wall_time=time.perf_counter() - start,
    )


def histogram_csv(histogram: Mapping[int, float]) -> str:
    """RFC 4180 rendering of the empirical law, one (count, frequency) row
    per observed value."""
    buf = io.StringIO()
    buf.write("count,frequency\r\n")
    for k in sorted(histogram):
        buf.write(f"{k},{histogram[k]!r}\r\n")
    return buf.getvalue()

"""Poisson-approximation error bounds for motif counts.

Every bound here has the same three-part shape: a term for copies meeting
at a single vertex, a term for a second copy on the same position, and one
term per overlap size ``s`` weighted by the overlap exponent ``kappa(s)``.
The variants differ in which worst-case edge probability feeds the terms
(block-model maximum, user-supplied conditional table, graphon maximum)
and in a dependence-width factor.  All variants require a strictly
balanced motif.

Large combinatorial factors are evaluated in floating point via product
forms; the relative error budget of the assembled bounds is ~1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import (
    IncompleteNuTable,
    NotStrictlyBalanced,
    TooManyTerms,
)
from .models import GraphonSpec, SbmParams, graphon_to_sbm, h_star
from .motif import Motif, MotifStats, compute_stats

_MAX_TERMS = 10**8
_CHUNK = 1 << 18


def _binom_float(n: int, k: int) -> float:
    """C(n, k) as a float, in product form to avoid huge intermediates."""
    out = 1.0
    for i in range(k):
        out *= (n - i) / (i + 1)
    return out


def _require_strictly_balanced(stats: MotifStats) -> None:
    if not stats.strictly_balanced:
        raise NotStrictlyBalanced(
            "bound requires a strictly balanced motif (gamma > 0)"
        )


def _stats_for(m: Motif, stats: MotifStats | None) -> MotifStats:
    return compute_stats(m) if stats is None else stats


# ------------------------------------------------------------------ mu


def _weighted_product_sum(
    weights: np.ndarray, mat: np.ndarray, m: Motif
) -> float:
    """Exact sum over all Q^v class tuples of
    prod_i weights[c_i] * prod_{(u,v) in E} mat[c_u, c_v], chunked."""
    q = len(weights)
    v = m.vertex_count
    total_terms = q**v
    if total_terms > _MAX_TERMS:
        raise TooManyTerms(
            f"{q}^{v} = {total_terms} terms exceeds the {_MAX_TERMS} budget"
        )
    chunk_sums = []
    for start in range(0, total_terms, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total_terms), dtype=np.int64)
        digits = [(idx // q**j) % q for j in range(v)]
        term = weights[digits[0]].astype(float)
        for j in range(1, v):
            term *= weights[digits[j]]
        for a, b in m.edges:
            term *= mat[digits[a], digits[b]]
        chunk_sums.append(float(term.sum()))
    return math.fsum(chunk_sums)


def mu_sbm(params: SbmParams, m: Motif) -> float:
    """Occurrence probability of one fixed copy of the motif under the
    block model: the exact average of the edge-probability product over all
    class assignments of the motif's vertices."""
    weights = np.asarray(params.proportions)
    mat = np.asarray(params.edge_probs)
    return _weighted_product_sum(weights, mat, m)


def _midpoint_mu(spec: GraphonSpec, m: Motif, q: int) -> float:
    """Tensor midpoint rule with q nodes per vertex dimension."""
    u = (np.arange(q) + 0.5) / q
    mat = spec.evaluate(u[:, None], u[None, :])
    weights = np.full(q, 1.0 / q)
    return _weighted_product_sum(weights, mat, m)


def mu_graphon_with_error(
    spec: GraphonSpec, m: Motif, quad_points: int = 64
) -> tuple[float, float]:
    """Occurrence probability under the graphon model plus an error
    estimate.

    Piecewise-constant surfaces reduce exactly to the block model.  The
    smooth families integrate the edge-probability product with the tensor
    midpoint rule on two grids (``quad_points`` and half that), returning
    the Richardson extrapolation of the pair: the plain one-grid value
    carries an O(q^-2) bias that would dominate the integration budget, and
    the two-grid combination cancels it.  The gap between the fine-grid
    value and the extrapolation is the reported error estimate.
    """
    if quad_points < 2:
        raise ValueError("quad_points must be >= 2")
    if spec.family == "piecewise_constant":
        return mu_sbm(graphon_to_sbm(spec), m), 0.0
    fine = quad_points
    coarse = max(1, quad_points // 2)
    m_fine = _midpoint_mu(spec, m, fine)
    m_coarse = _midpoint_mu(spec, m, coarse)
    value = (fine**2 * m_fine - coarse**2 * m_coarse) / (fine**2 - coarse**2)
    value = min(1.0, max(0.0, value))
    return value, abs(value - m_fine)


def mu_graphon(spec: GraphonSpec, m: Motif, quad_points: int = 64) -> float:
    """Occurrence probability under the graphon model (see
    :func:`mu_graphon_with_error`)."""
    return mu_graphon_with_error(spec, m, quad_points)[0]


def lambda_value(
    m: Motif, n: int, mu: float, stats: MotifStats | None = None
) -> float:
    """Expected copy count: positions times copies per position times the
    single-copy occurrence probability."""
    if n < m.vertex_count:
        raise ValueError(f"n={n} smaller than motif ({m.vertex_count} vertices)")
    stats = _stats_for(m, stats)
    return _binom_float(n, m.vertex_count) * stats.rho * mu


# --------------------------------------------------------------- reports


@dataclass(frozen=True)
class BoundReport:
    """A fully itemised total-variation bound.

    ``bound`` equals ``prefactor * rho * dependence_factor *
    (pair_term + same_position_term + sum of overlap_terms)`` exactly as
    assembled.  ``prefactor_used`` records which of the two valid
    prefactors (``1 - exp(-lambda)`` or ``min(1, lambda)``) was smaller.
    """

    variant: str
    mu: float
    lam: float
    prefactor: float
    prefactor_used: str
    rho: int
    dependence_factor: float
    pair_term: float
    same_position_term: float
    overlap_terms: Mapping[int, float]
    bound: float
    quadrature_error: float | None = None

    @property
    def vacuous(self) -> bool:
        """True when the bound exceeds 1 and so says nothing."""
        return self.bound > 1.0

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "mu": self.mu,
            "lambda": self.lam,
            "prefactor": self.prefactor,
            "prefactor_used": self.prefactor_used,
            "rho": self.rho,
            "dependence_factor": self.dependence_factor,
            "per_term": {
                "pair_term": self.pair_term,
                "same_position_term": self.same_position_term,
                "overlap_terms": {
                    str(s): t for s, t in sorted(self.overlap_terms.items())
                },
            },
            "bound": self.bound,
            "vacuous": self.vacuous,
            "quadrature_error": self.quadrature_error,
        }


def _prefactor(lam: float) -> tuple[float, str]:
    one_minus_exp = -math.expm1(-lam)
    capped = min(1.0, lam)
    if capped < one_minus_exp:
        return capped, "min(1,lambda)"
    return one_minus_exp, "1-exp(-lambda)"


def _assemble(
    variant: str,
    m: Motif,
    stats: MotifStats,
    n: int,
    mu: float,
    pair_prob: float,
    same_prob: float,
    overlap_prob: Mapping[int, float],
    dependence_factor: float,
    quadrature_error: float | None = None,
) -> BoundReport:
    v = m.vertex_count
    lam = lambda_value(m, n, mu, stats)
    nf = float(n)
    pair = 2.0 * v * v / math.factorial(v) * nf ** (v - 1) * pair_prob
    overlaps = {
        s: math.comb(v, s) * nf ** (v - s) * overlap_prob[s] / math.factorial(v - s)
        for s in range(2, v)
    }
    prefactor, label = _prefactor(lam)
    bracket = math.fsum([pair, same_prob, *overlaps.values()])
    bound = prefactor * stats.rho * dependence_factor * bracket
    return BoundReport(
        variant=variant,
        mu=mu,
        lam=lam,
        prefactor=prefactor,
        prefactor_used=label,
        rho=stats.rho,
        dependence_factor=dependence_factor,
        pair_term=pair,
        same_position_term=same_prob,
        overlap_terms=overlaps,
        bound=bound,
        quadrature_error=quadrature_error,
    )


# ---------------------------------------------------------------- bounds


def bound_sbm(
    params: SbmParams, m: Motif, n: int, stats: MotifStats | None = None
) -> BoundReport:
    """Total-variation bound for the block model, driven by the maximum
    edge probability; non-integer overlap exponents are applied as real
    powers of it."""
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    mu = mu_sbm(params, m)
    x = params.pi_star
    e = m.edge_count
    return _assemble(
        "sbm",
        m,
        stats,
        n,
        mu,
        pair_prob=x**e,
        same_prob=x,
        overlap_prob={s: x ** float(k) for s, k in stats.kappa.items()},
        dependence_factor=1.0,
    )


def bound_independent_edges(
    m: Motif, n: int, nu_max: float, stats: MotifStats | None = None
) -> BoundReport:
    """Bound for independent (not necessarily identical) edges with maximum
    mean ``nu_max``.  The reference mean uses ``nu_max ** e`` for the
    occurrence probability, which is exact in the equal-probability case
    and the natural ceiling otherwise."""
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    if not 0.0 <= nu_max <= 1.0:
        raise ValueError("nu_max must be a probability")
    e = m.edge_count
    return _assemble(
        "independent",
        m,
        stats,
        n,
        mu=nu_max**e,
        pair_prob=nu_max**e,
        same_prob=nu_max,
        overlap_prob={s: nu_max ** float(k) for s, k in stats.kappa.items()},
        dependence_factor=1.0,
    )


@dataclass(frozen=True)
class NuTable:
    """Worst-case conditional probabilities for dependent edge models.

    ``entries[(k, v, s)]`` bounds the probability that ``k`` further edges
    are all present given ``v`` motif edges whose vertex sets share ``s``
    vertices with them.  ``k`` follows the overlap exponent and may be a
    non-integer rational; keys are normalised to exact fractions and must
    be supplied at exactly the exponents the bound consumes.
    """

    entries: Mapping[tuple[Fraction, int, int], float] = field(
        default_factory=dict
    )

    def __post_init__(self):
        norm = {}
        for (k, v, s), val in self.entries.items():
            val = float(val)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"nu value {val} not in [0, 1]")
            norm[(Fraction(k), int(v), int(s))] = val
        object.__setattr__(self, "entries", norm)

    def lookup(self, k, v: int, s: int) -> float:
        key = (Fraction(k), int(v), int(s))
        try:
            return self.entries[key]
        except KeyError:
            raise IncompleteNuTable(
                f"missing nu entry for (k={key[0]}, v={v}, s={s})"
            ) from None

    @staticmethod
    def required_triples(
        m: Motif, stats: MotifStats | None = None
    ) -> tuple[tuple[Fraction, int, int], ...]:
        """Every (k, v, s) triple the dependent-edge bound consumes."""
        stats = _stats_for(m, stats)
        e = m.edge_count
        triples = [(Fraction(e), e, 1), (Fraction(1), e, 1)]
        triples.extend((stats.kappa[s], e, s) for s in sorted(stats.kappa))
        return tuple(triples)

    @classmethod
    def from_power(
        cls, nu: float, m: Motif, stats: MotifStats | None = None
    ) -> "NuTable":
        """The table ``nu ** k`` at every required triple (the independent
        and graphon specialisations)."""
        if not 0.0 <= nu <= 1.0:
            raise ValueError("nu must be a probability")
        return cls(
            {
                t: nu ** float(t[0])
                for t in cls.required_triples(m, stats)
            }
        )

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"k": str(k), "v": v, "s": s, "value": val}
                for (k, v, s), val in sorted(
                    self.entries.items(), key=lambda kv: (kv[0][2], kv[0][0])
                )
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NuTable":
        entries = {}
        for row in data.get("entries", []):
            try:
                key = (Fraction(str(row["k"])), int(row["v"]), int(row["s"]))
                entries[key] = float(row["value"])
            except (KeyError, TypeError, ZeroDivisionError) as exc:
                raise ValueError(f"malformed nu-table row {row!r}") from exc
        return cls(entries)


def bound_nu(
    m: Motif,
    n: int,
    g: int,
    mu: float,
    nu: NuTable,
    stats: MotifStats | None = None,
) -> BoundReport:
    """Bound for locally dependent edge probabilities.

    ``g`` caps the width of any edge's dependence neighborhood and ``mu``
    is the model's occurrence probability, supplied by the caller because
    the general dependent model leaves it model-specific.
    """
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    if g < 1:
        raise ValueError("dependence width g must be >= 1")
    e = m.edge_count
    return _assemble(
        "nu",
        m,
        stats,
        n,
        mu,
        pair_prob=nu.lookup(e, e, 1),
        same_prob=nu.lookup(1, e, 1),
        overlap_prob={s: nu.lookup(k, e, s) for s, k in stats.kappa.items()},
        dependence_factor=float(g),
    )


def bound_graphon(
    spec: GraphonSpec,
    m: Motif,
    n: int,
    quad_points: int = 64,
    stats: MotifStats | None = None,
) -> BoundReport:
    """Bound for the graphon model: edges sharing a vertex are dependent,
    giving dependence width 2, with the graphon's maximum in place of the
    maximum edge probability."""
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    mu, quad_err = mu_graphon_with_error(spec, m, quad_points)
    hs = h_star(spec)
    e = m.edge_count
    return _assemble(
        "graphon",
        m,
        stats,
        n,
        mu,
        pair_prob=hs**e,
        same_prob=hs,
        overlap_prob={s: hs ** float(k) for s, k in stats.kappa.items()},
        dependence_factor=2.0,
        quadrature_error=quad_err,
    )


# ---------------------------------------------------------- scaled form


@dataclass(frozen=True)
class ScaledBoundReport:
    """Bound under the critical scaling where every edge probability sits
    between ``c * n^(-1/d)`` and ``C * n^(-1/d)``: the expected count is
    then sandwiched in ``[lambda_lower, lambda_upper]`` and the bound uses
    the smaller of the two overlap envelopes A and B."""

    C: float
    c: float
    n: int
    lambda_lower: float
    lambda_upper: float
    A: float
    B: float
    bound: float

    def to_dict(self) -> dict:
        return {
            "variant": "scaled",
            "C": self.C,
            "c": self.c,
            "n": self.n,
            "lambda_lower": self.lambda_lower,
            "lambda_upper": self.lambda_upper,
            "A": self.A,
            "B": self.B,
            "bound": self.bound,
        }


def bound_scaled(
    m: Motif, n: int, c: float, C: float, stats: MotifStats | None = None
) -> ScaledBoundReport:
    """Evaluate the scaled-regime bound for constants ``0 < c <= C``."""
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    if not 0 < c <= C:
        raise ValueError("need 0 < c <= C")
    if n < m.vertex_count:
        raise ValueError(f"n={n} smaller than motif ({m.vertex_count} vertices)")
    v, e = m.vertex_count, m.edge_count
    d = float(stats.density)
    alpha = float(stats.alpha)
    gamma = float(stats.gamma)
    rho = stats.rho
    lam_lo = rho / v**v * c**e
    lam_hi = rho / math.factorial(v) * C**e
    nf = float(n)
    a_env = (1.0 + C**alpha) ** (v - 1) * nf ** (1.0 - alpha / d)
    b_env = C ** (e + gamma) * (1.0 + C**-d) ** (v - 1) * nf ** (-gamma / d)
    bound = (
        min(1.0, lam_hi)
        * rho
        * (
            2.0 * v * v / math.factorial(v) * C**e / nf
            + C * nf ** (-1.0 / d)
            + min(a_env, b_env)
        )
    )
    return ScaledBoundReport(
        C=C,
        c=c,
        n=n,
        lambda_lower=lam_lo,
        lambda_upper=lam_hi,
        A=a_env,
        B=b_env,
        bound=bound,
    )


def rate_exponent(m: Motif, stats: MotifStats | None = None) -> Fraction:
    """Decay exponent of the block-model bound when the maximum edge
    probability scales critically as ``n^(-1/d)``: the slowest of the
    pair term (exponent 1), the same-position term (1/d) and each overlap
    term (kappa(s)/d - (v - s)), in exact rationals."""
    stats = _stats_for(m, stats)
    _require_strictly_balanced(stats)
    v = m.vertex_count
    d = stats.density
    candidates = [Fraction(1), 1 / d]
    candidates.extend(stats.kappa[s] / d - (v - s) for s in stats.kappa)
    return min(candidates)

"""Poisson approximation bounds for motif counts in random graphs.

The library counts copies of a small fixed motif in stochastic block model
and graphon random graphs, evaluates explicit total-variation bounds
between the count's law and its Poisson reference, and validates those
bounds empirically with seeded Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .bounds import (
    BoundReport,
    NuTable,
    ScaledBoundReport,
    bound_graphon,
    bound_independent_edges,
    bound_nu,
    bound_sbm,
    bound_scaled,
    lambda_value,
    mu_graphon,
    mu_graphon_with_error,
    mu_sbm,
    rate_exponent,
)
from .counting import (
    CopyCount,
    copies_on_vertices,
    copy_indicators,
    count_copies,
    count_copies_bruteforce,
)
from .errors import (
    DuplicateEdge,
    EmptyEdgeSet,
    GraphTooLargeForOracle,
    IncompleteNuTable,
    InvalidMotifError,
    InvalidParams,
    IsolatedVertex,
    MotifLargerThanGraph,
    MotifPoissonError,
    NotStrictlyBalanced,
    SelfLoop,
    SingleEdge,
    TooLarge,
    TooManyTerms,
    UnnormalizedHistogram,
    WrongFamily,
)
from .models import (
    GraphonSpec,
    SampledGraph,
    SbmParams,
    erdos_renyi,
    graph_from_edge_text,
    graphon_to_sbm,
    h_star,
    sample_graphon,
    sample_sbm,
    substream_seed,
)
from .motif import (
    MAX_VERTICES,
    Motif,
    MotifStats,
    automorphism_count,
    builtin_motif,
    compute_stats,
    max_copy_capacity,
    motif_from_edge_list,
    motif_from_string,
    motif_from_text,
)
from .poisson import poisson_pmf, poisson_tail, tv_distance_empirical
from .simulate import (
    SimulationPlan,
    SimulationSummary,
    histogram_csv,
    run,
    tv_standard_error,
)

__all__ = [
    "BoundReport",
    "CopyCount",
    "DuplicateEdge",
    "EmptyEdgeSet",
    "GraphTooLargeForOracle",
    "GraphonSpec",
    "IncompleteNuTable",
    "InvalidMotifError",
    "InvalidParams",
    "IsolatedVertex",
    "MAX_VERTICES",
    "Motif",
    "MotifLargerThanGraph",
    "MotifPoissonError",
    "MotifStats",
    "NotStrictlyBalanced",
    "NuTable",
    "SampledGraph",
    "SbmParams",
    "ScaledBoundReport",
    "SelfLoop",
    "SimulationPlan",
    "SimulationSummary",
    "SingleEdge",
    "TooLarge",
    "TooManyTerms",
    "UnnormalizedHistogram",
    "WrongFamily",
    "automorphism_count",
    "bound_graphon",
    "bound_independent_edges",
    "bound_nu",
    "bound_sbm",
    "bound_scaled",
    "builtin_motif",
    "compute_stats",
    "copies_on_vertices",
    "copy_indicators",
    "count_copies",
    "count_copies_bruteforce",
    "erdos_renyi",
    "graph_from_edge_text",
    "graphon_to_sbm",
    "h_star",
    "histogram_csv",
    "lambda_value",
    "max_copy_capacity",
    "motif_from_edge_list",
    "motif_from_string",
    "motif_from_text",
    "mu_graphon",
    "mu_graphon_with_error",
    "mu_sbm",
    "poisson_pmf",
    "poisson_tail",
    "rate_exponent",
    "run",
    "sample_graphon",
    "sample_sbm",
    "substream_seed",
    "tv_distance_empirical",
    "tv_standard_error",
]

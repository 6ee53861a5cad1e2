"""Random-graph models: stochastic block model and graphon sampling.

Sampling is driven by the counter-based Philox generator keyed directly by
the caller's seed, so a sampled graph is a pure function of
``(params, n, seed)`` regardless of how surrounding work is scheduled.
Replicate ensembles derive one independent key per replicate index via
:func:`substream_seed`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import InvalidParams, WrongFamily

_PROPORTION_TOL = 1e-12
_SEED_MASK = (1 << 64) - 1

GRAPHON_FAMILIES = ("product", "piecewise_constant", "affine_mean")


def _check_probability_matrix(rows, what: str) -> tuple[tuple[float, ...], ...]:
    mat = tuple(tuple(float(x) for x in row) for row in rows)
    q = len(mat)
    if q == 0 or any(len(row) != q for row in mat):
        raise InvalidParams(f"{what} must be a non-empty square matrix")
    for a in range(q):
        for b in range(q):
            if not 0.0 <= mat[a][b] <= 1.0:
                raise InvalidParams(f"{what}[{a}][{b}]={mat[a][b]} not in [0, 1]")
            if mat[a][b] != mat[b][a]:
                raise InvalidParams(f"{what} not symmetric at ({a}, {b})")
    return mat


@dataclass(frozen=True)
class SbmParams:
    """Block model on latent classes: class labels are drawn independently
    from ``proportions`` and each vertex pair is an independent coin whose
    probability depends only on the two class labels."""

    class_count: int
    proportions: tuple[float, ...]
    edge_probs: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        q = self.class_count
        if q < 1:
            raise InvalidParams("class_count must be >= 1")
        f = tuple(float(x) for x in self.proportions)
        if len(f) != q:
            raise InvalidParams("proportions length must equal class_count")
        if any(x <= 0.0 for x in f):
            raise InvalidParams("proportions must be strictly positive")
        if abs(sum(f) - 1.0) > _PROPORTION_TOL:
            raise InvalidParams(f"proportions sum to {sum(f)!r}, not 1")
        pi = _check_probability_matrix(self.edge_probs, "edge_probs")
        if len(pi) != q:
            raise InvalidParams("edge_probs must be class_count x class_count")
        object.__setattr__(self, "proportions", f)
        object.__setattr__(self, "edge_probs", pi)

    @property
    def pi_star(self) -> float:
        """Maximum edge probability over all class pairs, diagonal
        included (diagonal entries enter the occurrence probability, so
        excluding them could understate the bound terms)."""
        return max(max(row) for row in self.edge_probs)

    def to_dict(self) -> dict:
        return {
            "Q": self.class_count,
            "f": list(self.proportions),
            "pi": [list(row) for row in self.edge_probs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SbmParams":
        try:
            return cls(int(data["Q"]), tuple(data["f"]), tuple(map(tuple, data["pi"])))
        except KeyError as exc:
            raise InvalidParams(f"missing SBM field {exc}") from exc


def erdos_renyi(p: float) -> SbmParams:
    """Single-class block model, i.e. every edge an independent ``p`` coin."""
    return SbmParams(1, (1.0,), ((float(p),),))


@dataclass(frozen=True)
class GraphonSpec:
    """A symmetric edge-probability surface on [0,1]^2 from a closed family.

    ``product``: c*x*y.  ``affine_mean``: c*(x+y)/2.  ``piecewise_constant``:
    constant blocks on a grid of breakpoints, equivalent to a block model.
    A closed family keeps the surface maximum exact and the parameterisation
    serialisable; piecewise-constant surfaces approximate any graphon to any
    resolution.
    """

    family: str
    scale: float | None = None
    breakpoints: tuple[float, ...] | None = None
    values: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        if self.family not in GRAPHON_FAMILIES:
            raise InvalidParams(
                f"unknown graphon family {self.family!r}; "
                f"expected one of {GRAPHON_FAMILIES}"
            )
        if self.family in ("product", "affine_mean"):
            if self.scale is None:
                raise InvalidParams(f"{self.family} graphon requires a scale")
            c = float(self.scale)
            if not 0.0 <= c <= 1.0:
                raise InvalidParams(f"scale {c} not in [0, 1]")
            object.__setattr__(self, "scale", c)
            if self.breakpoints is not None or self.values is not None:
                raise InvalidParams(f"{self.family} graphon takes only a scale")
        else:
            if self.breakpoints is None or self.values is None:
                raise InvalidParams(
                    "piecewise_constant graphon requires breakpoints and values"
                )
            bp = tuple(float(x) for x in self.breakpoints)
            if len(bp) < 2 or bp[0] != 0.0 or bp[-1] != 1.0:
                raise InvalidParams("breakpoints must run 0 = s_1 < ... < s_{Q+1} = 1")
            if any(a >= b for a, b in zip(bp, bp[1:])):
                raise InvalidParams("breakpoints must be strictly increasing")
            vals = _check_probability_matrix(self.values, "values")
            if len(vals) != len(bp) - 1:
                raise InvalidParams("values must be Q x Q for Q+1 breakpoints")
            object.__setattr__(self, "breakpoints", bp)
            object.__setattr__(self, "values", vals)
            if self.scale is not None:
                raise InvalidParams("piecewise_constant graphon takes no scale")

    def evaluate(self, x, y):
        """Vectorised h(x, y); symmetric by construction in every family."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.family == "product":
            return self.scale * x * y
        if self.family == "affine_mean":
            return self.scale * 0.5 * (x + y)
        vals = np.asarray(self.values)
        return vals[self._block_of(x), self._block_of(y)]

    def _block_of(self, u):
        edges = np.asarray(self.breakpoints[1:-1])
        return np.searchsorted(edges, u, side="right")

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        if self.family in ("product", "affine_mean"):
            out["c"] = self.scale
        else:
            out["breakpoints"] = list(self.breakpoints)
            out["values"] = [list(row) for row in self.values]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "GraphonSpec":
        fam = data.get("family")
        if fam in ("product", "affine_mean"):
            return cls(family=fam, scale=data.get("c"))
        if fam == "piecewise_constant":
            return cls(
                family=fam,
                breakpoints=tuple(data.get("breakpoints", ())),
                values=tuple(map(tuple, data.get("values", ()))),
            )
        raise InvalidParams(f"unknown graphon family {fam!r}")


def h_star(spec: GraphonSpec) -> float:
    """Exact maximum of the graphon surface."""
    if spec.family in ("product", "affine_mean"):
        return spec.scale  # attained at (1, 1)
    return max(max(row) for row in spec.values)


def graphon_to_sbm(spec: GraphonSpec) -> SbmParams:
    """The block model equivalent to a piecewise-constant graphon: class
    proportions are the breakpoint interval lengths."""
    if spec.family != "piecewise_constant":
        raise WrongFamily(
            f"graphon_to_sbm requires piecewise_constant, got {spec.family}"
        )
    f = tuple(b - a for a, b in zip(spec.breakpoints, spec.breakpoints[1:]))
    return SbmParams(len(f), f, spec.values)


@dataclass(frozen=True)
class SampledGraph:
    """One realisation: a simple undirected graph with optional latent data.

    Adjacency is stored as one integer bitset per vertex; the class labels
    (block model) or uniform variates (graphon) that generated the graph are
    retained for diagnostics only, bounds never read them.
    """

    n: int
    adjacency: tuple[int, ...]
    class_labels: tuple[int, ...] | None = None
    latent_u: tuple[float, ...] | None = None

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adjacency[u] >> v) & 1)

    def degree(self, u: int) -> int:
        return self.adjacency[u].bit_count()

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adjacency) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            mask = self.adjacency[u] >> (u + 1) << (u + 1)
            while mask:
                b = mask & -mask
                mask ^= b
                yield (u, b.bit_length() - 1)

    def to_edge_text(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())


def graph_from_edge_text(text: str, n: int | None = None) -> SampledGraph:
    """Parse a graph from edge-list text (same format motifs use).

    ``n`` extends the vertex universe beyond the highest label seen, which
    unlike motifs is legal for sampled graphs (isolated vertices allowed).
    """
    pairs = []
    top = -1
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        u, v = (int(x) for x in line.split())
        if u == v:
            raise InvalidParams(f"self-loop at {u}")
        pairs.append((u, v))
        top = max(top, u, v)
    size = max(top + 1, n or 0)
    if size <= 0:
        raise InvalidParams("graph has no vertices")
    adj = [0] * size
    for u, v in pairs:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return SampledGraph(size, tuple(adj))


def _generator(seed: int) -> np.random.Generator:
    if not 0 <= seed <= _SEED_MASK:
        raise InvalidParams("seed must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.Philox(key=seed))


def substream_seed(seed: int, index: int) -> int:
    """Derive an independent 64-bit sub-seed for replicate ``index``.

    SplitMix64-style mixing: distinct (seed, index) pairs land on distinct
    Philox keys, making every replicate reproducible on its own no matter
    how replicates are partitioned across workers.
    """
    z = (seed ^ (index * 0x9E3779B97F4A7C15)) & _SEED_MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _SEED_MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _SEED_MASK
    return (z ^ (z >> 31)) & _SEED_MASK


def _pack_adjacency(upper_bits: np.ndarray, n: int) -> tuple[int, ...]:
    """Symmetric bitset rows from the boolean upper triangle (i < j)."""
    dense = np.zeros((n, n), dtype=bool)
    iu, ju = np.triu_indices(n, k=1)
    dense[iu, ju] = upper_bits
    dense |= dense.T
    row_bytes = np.packbits(dense, axis=1, bitorder="little")
    return tuple(
        int.from_bytes(row_bytes[i].tobytes(), "little") for i in range(n)
    )


def sample_sbm(params: SbmParams, n: int, seed: int) -> SampledGraph:
    """Draw one block-model graph.

    Class labels first (n inverse-CDF draws), then one uniform per vertex
    pair in fixed row-major upper-triangle order, so the output is fully
    determined by the seed.
    """
    if n < 2:
        raise InvalidParams("n must be >= 2")
    rng = _generator(seed)
    cum = np.cumsum(params.proportions)
    labels = np.searchsorted(cum, rng.random(n), side="right")
    labels = np.minimum(labels, params.class_count - 1)
    iu, ju = np.triu_indices(n, k=1)
    pi = np.asarray(params.edge_probs)
    thresholds = pi[labels[iu], labels[ju]]
    bits = rng.random(iu.size) < thresholds
    return SampledGraph(
        n=n,
        adjacency=_pack_adjacency(bits, n),
        class_labels=tuple(int(x) for x in labels),
    )


def sample_graphon(spec: GraphonSpec, n: int, seed: int) -> SampledGraph:
    """Draw one graphon graph: i.i.d. uniforms per vertex, then one coin per
    pair with probability h(U_i, U_j), in the same fixed pair order as the
    block-model sampler."""
    if n < 2:
        raise InvalidParams("n must be >= 2")
    rng = _generator(seed)
    latent = rng.random(n)
    iu, ju = np.triu_indices(n, k=1)
    thresholds = spec.evaluate(latent[iu], latent[ju])
    bits = rng.random(iu.size) < thresholds
    return SampledGraph(
        n=n,
        adjacency=_pack_adjacency(bits, n),
        latent_u=tuple(float(x) for x in latent),
    )

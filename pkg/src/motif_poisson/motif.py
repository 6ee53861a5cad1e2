"""Motif representation and exact graph invariants.

A motif is a small fixed graph whose copies are counted inside a large
random graph.  All density-type invariants (density, alpha, gamma, the
overlap exponents kappa) are computed in exact rational arithmetic: the
strict inequalities that define strict balancedness involve ties at
rational values, so floating point would make them untestable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateEdge,
    EmptyEdgeSet,
    IsolatedVertex,
    SelfLoop,
    SingleEdge,
    TooLarge,
)

#: Hard cap on motif size.  Automorphisms are found by exhaustive search over
#: vertex permutations (10! = 3,628,800) and the invariant minima enumerate
#: subgraphs, so larger motifs are rejected rather than silently slow.
MAX_VERTICES = 10

#: Above this many edges the subgraph minima switch from direct edge-subset
#: enumeration (2^e - 2 subsets, vectorised) to an equivalent reduction over
#: vertex subsets; see ``_subgraph_minima_by_vertex_sets``.
_EDGE_ENUM_MAX = 21

Edge = tuple[int, int]

BUILTIN_FAMILIES = ("tree_path", "cycle", "almost_complete", "complete")


@dataclass(frozen=True)
class Motif:
    """A labelled graph on vertices ``0..vertex_count-1`` with no isolated
    vertices, no self-loops and more than one edge.

    Edges are stored canonically: each pair sorted, the tuple of pairs
    sorted.  Two motifs compare equal iff they are the same labelled graph.
    """

    vertex_count: int
    edges: tuple[Edge, ...]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def neighbor_masks(self) -> tuple[int, ...]:
        """Per-vertex adjacency bitsets."""
        masks = [0] * self.vertex_count
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return tuple(masks)

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def relabelled(self, perm: Sequence[int]) -> "Motif":
        """The same graph with vertex ``i`` renamed ``perm[i]``."""
        edges = tuple(
            sorted(tuple(sorted((int(perm[u]), int(perm[v])))) for u, v in self.edges)
        )
        return Motif(self.vertex_count, edges)

    def to_text(self) -> str:
        """Edge-list text, one ``u v`` line per edge."""
        return "".join(f"{u} {v}\n" for u, v in self.edges)


def motif_from_edge_list(
    edges: Iterable[Sequence[int]], vertex_count: int | None = None
) -> Motif:
    """Build a validated motif from unordered vertex pairs.

    Vertices are renumbered densely to ``0..v-1`` preserving label order;
    original labels are not retained.  ``vertex_count`` may assert a vertex
    universe larger than the labels touched by the edges, in which case the
    extra vertices would be isolated and the motif is rejected.
    """
    edge_list = [tuple(e) for e in edges]
    if not edge_list:
        raise EmptyEdgeSet("motif requires at least one edge")
    seen: set[Edge] = set()
    canonical: list[Edge] = []
    for e in edge_list:
        if len(e) != 2:
            raise ValueError(f"not a vertex pair: {e!r}")
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            raise DuplicateEdge(f"edge ({u}, {v}) listed twice")
        seen.add((u, v))
        canonical.append((u, v))
    labels = sorted({x for e in canonical for x in e})
    if vertex_count is not None:
        if vertex_count > len(labels):
            raise IsolatedVertex(
                f"vertex_count={vertex_count} but only {len(labels)} vertices "
                "are endpoints of an edge"
            )
        if vertex_count < len(labels):
            raise ValueError(
                f"vertex_count={vertex_count} but edges touch {len(labels)} vertices"
            )
    remap = {lab: i for i, lab in enumerate(labels)}
    v = len(labels)
    if v > MAX_VERTICES:
        raise TooLarge(f"motif has {v} vertices; cap is {MAX_VERTICES}")
    edges_t = tuple(sorted((remap[u], remap[v]) for u, v in canonical))
    if len(edges_t) <= 1:
        raise SingleEdge("motif must have more than one edge")
    return Motif(v, edges_t)


def builtin_motif(family: str, v: int) -> Motif:
    """One of the four standard families on ``v >= 3`` vertices.

    ``tree_path`` is the path (the canonical tree representative: the
    density-type invariants of a tree depend only on its edge count, so any
    tree shares them; other trees can be supplied as edge lists).
    ``almost_complete`` is the complete graph with one edge removed; at
    ``v = 3`` it coincides with the path.
    """
    if family not in BUILTIN_FAMILIES:
        raise ValueError(
            f"unknown family {family!r}; expected one of {BUILTIN_FAMILIES}"
        )
    if v < 3:
        raise ValueError("builtin motifs require v >= 3")
    if v > MAX_VERTICES:
        raise TooLarge(f"motif has {v} vertices; cap is {MAX_VERTICES}")
    if family == "tree_path":
        edges = [(i, i + 1) for i in range(v - 1)]
    elif family == "cycle":
        edges = [(i, (i + 1) % v) for i in range(v)]
    else:
        edges = list(itertools.combinations(range(v), 2))
        if family == "almost_complete":
            # dropping (0, v-1) makes the v=3 case literally the path
            edges.remove((0, v - 1))
    return motif_from_edge_list(edges)

_SPEC_ALIASES = {
    "tree": "tree_path",
    "tree_path": "tree_path",
    "path": "tree_path",
    "cycle": "cycle",
    "almost_complete": "almost_complete",
    "complete": "complete",
}


def motif_from_string(spec: str) -> Motif:
    """Parse a ``family:v`` builtin reference, e.g. ``"cycle:5"``."""
    name, _, size = spec.partition(":")
    name = name.strip().lower()
    if name not in _SPEC_ALIASES or not size:
        raise ValueError(
            f"bad motif spec {spec!r}; expected family:v with family in "
            f"{sorted(set(_SPEC_ALIASES))}"
        )
    return builtin_motif(_SPEC_ALIASES[name], int(size))


def motif_from_text(text: str) -> Motif:
    """Parse edge-list text: one ``u v`` pair per line, ``#`` comments."""
    edges = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line: {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return motif_from_edge_list(edges)


def automorphism_count(m: Motif) -> int:
    """Order of the automorphism group of ``m``.

    Exhaustive search over vertex permutations, organised as a backtracking
    scan so non-automorphisms are abandoned at the first broken edge.  The
    ``MAX_VERTICES`` cap keeps the worst case (a complete graph) tractable.
    """
    v = m.vertex_count
    adj = m.neighbor_masks()
    deg = m.degrees
    count = 0
    image = [0] * v

    def extend(pos: int, used: int) -> None:
        nonlocal count
        if pos == v:
            count += 1
            return
        for cand in range(v):
            bit = 1 << cand
            if used & bit or deg[cand] != deg[pos]:
                continue
            # every already-placed neighbor of pos must map to a neighbor
            ok = True
            lower = adj[pos] & ((1 << pos) - 1)
            while lower:
                b = lower & -lower
                lower ^= b
                if not (adj[cand] >> image[b.bit_length() - 1]) & 1:
                    ok = False
                    break
            # and every placed non-neighbor must stay a non-neighbor
            if ok:
                non = ~adj[pos] & ((1 << pos) - 1)
                while non:
                    b = non & -non
                    non ^= b
                    if (adj[cand] >> image[b.bit_length() - 1]) & 1:
                        ok = False
                        break
            if ok:
                image[pos] = cand
                extend(pos + 1, used | bit)

    extend(0, 0)
    return count


@dataclass(frozen=True)
class MotifStats:
    """Exact invariants of a motif.

    ``density`` is edges per vertex.  ``alpha`` is the minimum, over proper
    subgraphs on strictly fewer vertices, of the edge deficit per missing
    vertex; ``gamma`` is the minimum density gap scaled by subgraph order.
    ``kappa[s]`` is the overlap exponent used by the error bounds for two
    copies sharing ``s`` vertices.  ``rho`` is the number of distinct copies
    of the motif on a fixed vertex set of its own size.
    """

    density: Fraction
    alpha: Fraction
    gamma: Fraction
    automorphism_count: int
    rho: int
    strictly_balanced: bool
    kappa: Mapping[int, Fraction]
    degrees: tuple[int, ...]


def _subgraph_minima_by_edge_subsets(m: Motif) -> tuple[Fraction, Fraction]:
    """(alpha, gamma) by direct enumeration of all proper non-empty edge
    subsets, vectorised.

    A subgraph without isolated vertices is exactly an edge subset together
    with its endpoints, so the 2^e - 2 proper non-empty subsets parameterise
    the minima's range.  Returns exact rationals: gamma's minimum is taken
    over the integer scores e(G)*v(H) - v(G)*e(H), alpha's per distinct
    denominator v(G) - v(H).
    """
    v, e = m.vertex_count, m.edge_count
    n_subsets = 1 << e
    # vertex bitmask of each subset, built by doubling on each edge bit
    edge_vmask = np.array(
        [(1 << a) | (1 << b) for a, b in m.edges], dtype=np.uint16
    )
    vmask = np.zeros(n_subsets, dtype=np.uint16)
    for j in range(e):
        size = 1 << j
        vmask[size : 2 * size] = vmask[:size] | edge_vmask[j]
    subset_ids = np.arange(n_subsets, dtype=np.uint32)
    e_h = np.bitwise_count(subset_ids).astype(np.int64)
    v_h = np.bitwise_count(vmask).astype(np.int64)
    proper = (subset_ids != 0) & (subset_ids != n_subsets - 1)

    gamma_scores = e * v_h - v * e_h
    gamma = Fraction(int(gamma_scores[proper].min()), v)

    alpha = None
    missing = v - v_h
    for dv in range(1, v - 1):
        sel = proper & (missing == dv)
        if not sel.any():
            continue
        cand = Fraction(int(e - e_h[sel].max()), dv)
        if alpha is None or cand < alpha:
            alpha = cand
    assert alpha is not None  # a single edge always has v(H)=2 < v
    return alpha, gamma


def _subgraph_minima_by_vertex_sets(m: Motif) -> tuple[Fraction, Fraction]:
    """(alpha, gamma) via the vertex-subset reduction, for dense motifs.

    Both minima are monotone in the subgraph's edge count at fixed vertex
    count, so only the densest subgraph on each vertex set matters: the
    induced subgraph, valid whenever it leaves no vertex isolated.  Proper
    spanning subgraphs additionally contribute to gamma; the best of those
    removes a single edge whose endpoints both have degree >= 2 (if every
    edge has a degree-1 endpoint, any removal isolates a vertex and no
    proper spanning subgraph exists).  Gives the same exact values as
    ``_subgraph_minima_by_edge_subsets``.
    """
    v, e = m.vertex_count, m.edge_count
    adj = m.neighbor_masks()
    deg = m.degrees

    alpha: Fraction | None = None
    gamma: Fraction | None = None

    def offer(v_h: int, e_h: int) -> None:
        nonlocal alpha, gamma
        g_cand = Fraction(e * v_h - v * e_h, v)
        if gamma is None or g_cand < gamma:
            gamma = g_cand
        if v_h < v:
            a_cand = Fraction(e - e_h, v - v_h)
            if alpha is None or a_cand < alpha:
                alpha = a_cand

    for mask in range(1, (1 << v) - 1):
        members = [i for i in range(v) if (mask >> i) & 1]
        if len(members) < 2:
            continue
        if any(adj[i] & mask == 0 for i in members):
            continue  # induced subgraph would isolate i
        e_ind = sum((adj[i] & mask).bit_count() for i in members) // 2
        if e_ind == 0:
            continue
        offer(len(members), e_ind)

    if any(deg[a] >= 2 and deg[b] >= 2 for a, b in m.edges):
        offer(v, e - 1)

    assert alpha is not None and gamma is not None
    return alpha, gamma


@lru_cache(maxsize=None)
def compute_stats(m: Motif) -> MotifStats:
    """All exact invariants of a motif, from exhaustive subgraph enumeration.

    The minima over proper non-empty subgraphs without isolated vertices are
    taken over edge subsets directly; motifs too dense for that enumeration
    fall back to an equivalent vertex-subset reduction.  ``kappa`` covers
    every overlap ``s`` in ``2..v-1``.
    """
    v, e = m.vertex_count, m.edge_count
    d = Fraction(e, v)
    if e <= _EDGE_ENUM_MAX:
        alpha, gamma = _subgraph_minima_by_edge_subsets(m)
    else:
        alpha, gamma = _subgraph_minima_by_vertex_sets(m)
    aut = automorphism_count(m)
    fact = math.factorial(v)
    assert fact % aut == 0
    kappa = {
        s: max(e - s * d + gamma, (v - s) * alpha) for s in range(2, v)
    }
    return MotifStats(
        density=d,
        alpha=alpha,
        gamma=gamma,
        automorphism_count=aut,
        rho=fact // aut,
        strictly_balanced=gamma > 0,
        kappa=kappa,
        degrees=m.degrees,
    )


def max_copy_capacity(m: Motif, n: int) -> int:
    """Maximum possible number of copies of ``m`` in any graph on ``n``
    vertices: the number of vertex-set positions times the number of
    distinct copies per position.  Exact integer (Python integers do not
    overflow, so no saturation can occur).
    """
    if n < m.vertex_count:
        raise ValueError(f"n={n} smaller than motif ({m.vertex_count} vertices)")
    stats = compute_stats(m)
    return math.comb(n, m.vertex_count) * stats.rho


def stats_to_dict(stats: MotifStats) -> dict:
    """JSON-friendly rendering; rationals as ``p/q`` strings."""
    return {
        "density": str(stats.density),
        "alpha": str(stats.alpha),
        "gamma": str(stats.gamma),
        "automorphism_count": stats.automorphism_count,
        "rho": stats.rho,
        "strictly_balanced": stats.strictly_balanced,
        "kappa": {str(s): str(k) for s, k in sorted(stats.kappa.items())},
        "degrees": list(stats.degrees),
    }

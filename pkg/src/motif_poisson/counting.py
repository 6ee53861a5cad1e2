"""Exact motif counting.

``count_copies`` is the production counter: a backtracking search for
injective edge-preserving maps with bitset candidate filtering, divided by
the automorphism count.  ``count_copies_bruteforce`` enumerates every
vertex-set position and every distinct copy of the motif on it, exactly as
the count is defined, and serves as the independent oracle.  Copies are
counted, not induced copies: extra edges among the image vertices are
permitted.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import GraphTooLargeForOracle, MotifLargerThanGraph
from .models import SampledGraph
from .motif import Motif, automorphism_count

#: The brute-force oracle touches all C(n, v) positions times all copies per
#: position; above this many vertices that blows up combinatorially.
ORACLE_MAX_VERTICES = 14


@dataclass(frozen=True)
class CopyCount:
    """A motif count together with the underlying injection count.

    ``injections`` is the number of injective edge-preserving maps from the
    motif into the graph; dividing by the automorphism count gives the copy
    count, and that division must be exact.
    """

    count: int
    injections: int

    def __post_init__(self):
        if self.count < 0 or self.injections < 0:
            raise ValueError("counts must be non-negative")


def _search_order(m: Motif) -> tuple[list[int], list[list[int]]]:
    """Connectivity-aware vertex order plus, per position, the earlier
    positions holding already-mapped neighbors.

    Each next vertex is chosen adjacent to as many placed vertices as
    possible (ties broken by degree), so connected motifs never restart the
    candidate set; disconnected motifs start each component fresh with
    injectivity still enforced globally.
    """
    v = m.vertex_count
    adj = m.neighbor_masks()
    deg = m.degrees
    order: list[int] = []
    placed = 0
    remaining = set(range(v))
    while remaining:
        best = max(
            remaining,
            key=lambda u: ((adj[u] & placed).bit_count(), deg[u], -u),
        )
        order.append(best)
        placed |= 1 << best
        remaining.remove(best)
    pos_of = {u: i for i, u in enumerate(order)}
    back_edges: list[list[int]] = []
    for i, u in enumerate(order):
        back_edges.append(
            sorted(pos_of[w] for w in range(v) if (adj[u] >> w) & 1 and pos_of[w] < i)
        )
    return order, back_edges


def count_injections(g: SampledGraph, m: Motif) -> int:
    """Number of injective maps of the motif's vertices into the graph that
    carry every motif edge onto a graph edge."""
    v = m.vertex_count
    order, back_edges = _search_order(m)
    mdeg = m.degrees
    need_deg = [mdeg[u] for u in order]
    adj = g.adjacency
    gdeg = [a.bit_count() for a in adj]
    full = (1 << g.n) - 1
    images = [0] * v
    total = 0

    def extend(pos: int, used: int) -> None:
        nonlocal total
        if pos == v:
            total += 1
            return
        backs = back_edges[pos]
        if backs:
            cand = adj[images[backs[0]]]
            for q in backs[1:]:
                cand &= adj[images[q]]
            cand &= ~used
        else:
            cand = full & ~used
        dmin = need_deg[pos]
        while cand:
            bit = cand & -cand
            cand ^= bit
            i = bit.bit_length() - 1
            if gdeg[i] >= dmin:
                images[pos] = i
                extend(pos + 1, used | bit)

    extend(0, 0)
    return total


def count_copies(g: SampledGraph, m: Motif) -> CopyCount:
    """Exact number of copies of ``m`` in ``g``."""
    if g.n < m.vertex_count:
        raise MotifLargerThanGraph(
            f"graph has {g.n} vertices, motif needs {m.vertex_count}"
        )
    injections = count_injections(g, m)
    aut = automorphism_count(m)
    assert injections % aut == 0, "injections not divisible by automorphisms"
    return CopyCount(count=injections // aut, injections=injections)


@lru_cache(maxsize=None)
def placement_edge_sets(m: Motif) -> tuple[tuple[tuple[int, int], ...], ...]:
    """The distinct copies of the motif on placeholder slots ``0..v-1``:
    one canonical sorted edge tuple per copy, the whole family sorted.

    The family size equals v!/a(G); an assertion keeps that honest.
    """
    v = m.vertex_count
    seen = {
        tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in m.edges))
        for p in itertools.permutations(range(v))
    }
    family = tuple(sorted(seen))
    assert len(family) == math.factorial(v) // automorphism_count(m)
    return family


def copies_on_vertices(
    m: Motif, alpha: tuple[int, ...]
) -> list[tuple[tuple[int, int], ...]]:
    """All distinct copies of ``m`` on the fixed vertex tuple ``alpha``, as
    sorted edge tuples in a deterministic order (sorted by edge set)."""
    if len(alpha) != m.vertex_count:
        raise ValueError("alpha must have exactly v(G) vertices")
    out = []
    for slots in placement_edge_sets(m):
        out.append(
            tuple(sorted(tuple(sorted((alpha[a], alpha[b]))) for a, b in slots))
        )
    return sorted(out)


def copy_indicators(
    g: SampledGraph, m: Motif, alpha: tuple[int, ...]
) -> list[int]:
    """Indicator per distinct copy on ``alpha`` (order of
    :func:`copies_on_vertices`): 1 iff every edge of that copy is in ``g``."""
    return [
        int(all(g.has_edge(u, w) for u, w in copy))
        for copy in copies_on_vertices(m, alpha)
    ]


def count_copies_bruteforce(g: SampledGraph, m: Motif) -> CopyCount:
    """Oracle counter: sum the copy indicators over every vertex-set
    position, literally as the count is defined."""
    if g.n < m.vertex_count:
        raise MotifLargerThanGraph(
            f"graph has {g.n} vertices, motif needs {m.vertex_count}"
        )
    if g.n > ORACLE_MAX_VERTICES:
        raise GraphTooLargeForOracle(
            f"oracle capped at {ORACLE_MAX_VERTICES} vertices, got {g.n}"
        )
    total = 0
    for alpha in itertools.combinations(range(g.n), m.vertex_count):
        total += sum(copy_indicators(g, m, alpha))
    aut = automorphism_count(m)
    return CopyCount(count=total, injections=total * aut)

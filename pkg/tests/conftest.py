"""Shared test helpers: small independent oracles and random instances."""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from motif_poisson import Motif, SampledGraph, motif_from_edge_list


def subgraph_minima_oracle(m: Motif) -> tuple[Fraction, Fraction]:
    """(alpha, gamma) straight from the definitions: iterate every proper
    non-empty edge subset, take the subgraph on its endpoints."""
    v, e = m.vertex_count, m.edge_count
    d = Fraction(e, v)
    alpha = None
    gamma = None
    for r in range(1, e):
        for sub in itertools.combinations(m.edges, r):
            vh = len({x for ed in sub for x in ed})
            eh = len(sub)
            g_term = d * vh - eh
            if gamma is None or g_term < gamma:
                gamma = g_term
            if vh < v:
                a_term = Fraction(e - eh, v - vh)
                if alpha is None or a_term < alpha:
                    alpha = a_term
    return alpha, gamma


def automorphisms_oracle(m: Motif) -> int:
    """Count permutations fixing the edge set, by full enumeration."""
    es = set(m.edges)
    total = 0
    for p in itertools.permutations(range(m.vertex_count)):
        if all(tuple(sorted((p[a], p[b]))) in es for a, b in m.edges):
            total += 1
    return total


def random_motif(rng: np.random.Generator, v_max: int = 5) -> Motif:
    """A random valid motif: pick an edge subset of K_v with at least two
    edges; dense renumbering drops untouched vertices."""
    while True:
        v = int(rng.integers(3, v_max + 1))
        pairs = list(itertools.combinations(range(v), 2))
        k = int(rng.integers(2, len(pairs) + 1))
        chosen = [pairs[i] for i in rng.choice(len(pairs), size=k, replace=False)]
        try:
            return motif_from_edge_list(chosen)
        except Exception:
            continue


def graph_from_edges(n: int, edges) -> SampledGraph:
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return SampledGraph(n, tuple(adj))


def complete_graph(n: int) -> SampledGraph:
    return graph_from_edges(n, itertools.combinations(range(n), 2))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

"""Brute-force oracles and small builders shared by the tests."""

import json
import random
from itertools import combinations

import networkx as nx

from majority_choosability.choosability.graphs import FiniteGraph


def graph_from_edges(edges, vertices=None, allow_isolated=False) -> FiniteGraph:
    """Build a FiniteGraph from an edge list like ``["ab", "bc"]`` or ``[("a", "b")]``."""
    edges = [tuple(edge) for edge in edges]
    if vertices is None:
        vertices = sorted({v for edge in edges for v in edge})
    return FiniteGraph(vertices, edges, allow_isolated=allow_isolated)


def random_graph(seed: int, n: int, p: float = 0.35) -> FiniteGraph:
    """Seeded G(n, p) graph on vertices ``v0..v{n-1}``; isolated vertices are kept."""
    graph = nx.gnp_random_graph(n, p, seed=seed)
    return FiniteGraph(
        [f"v{i}" for i in graph.nodes],
        [(f"v{u}", f"v{v}") for u, v in graph.edges],
        allow_isolated=True,
    )


def random_subset(seed: int, vertices, p: float = 0.3) -> frozenset:
    rng = random.Random(seed)
    return frozenset(v for v in vertices if rng.random() < p)


def brute_force_is_closed(graph: FiniteGraph, vertex_set) -> bool:
    members = set(vertex_set)
    return all(
        any(u not in members for u in graph.neighbours(v))
        for v in graph.vertex_ids
        if v not in members
    )


def brute_force_closure(graph: FiniteGraph, A) -> frozenset:
    """Smallest closed superset of ``A``, by trying every superset in order of size."""
    A = frozenset(A)
    rest = [v for v in graph.vertex_ids if v not in A]
    for size in range(len(rest) + 1):
        for extra in combinations(rest, size):
            candidate = A | frozenset(extra)
            if brute_force_is_closed(graph, candidate):
                return candidate
    raise AssertionError("The whole vertex set is always closed")


def recount(graph: FiniteGraph, colouring, v) -> tuple[int, int]:
    """``(same, diff)`` over all neighbours, which must all be coloured."""
    neighbours = list(graph.neighbours(v))
    same = sum(1 for u in neighbours if colouring[u] == colouring[v])
    return same, len(neighbours) - same


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)

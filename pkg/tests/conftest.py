"""Shared test fixtures: independent brute-force oracles and instance builders.

The oracles here deliberately avoid the library's search kernels: matchings
are maximized by plain backtracking over edge subsets, orders by permutation
scans, so they stay valid cross-checks for the branch-and-bound paths.
"""

import random

import pytest

from naewidth.wgraph import WeightedGraph


def adjacency_sets(n, edges):
    adj = {i: set() for i in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def adj_fn(adj):
    return lambda u, v: v in adj[u]


def brute_max_matching(adjacent, side_a, side_b, conflict_in_a, conflict_in_b):
    """Exhaustive backtracking over cut-edge subsets; no bounding tricks."""
    cands = [(a, b) for a in side_a for b in side_b if adjacent(a, b)]

    def compatible(edge, chosen):
        a1, b1 = edge
        for a2, b2 in chosen:
            if a1 == a2 or b1 == b2:
                return False
            if adjacent(a1, b2) or adjacent(a2, b1):
                return False
            if conflict_in_a and adjacent(a1, a2):
                return False
            if conflict_in_b and adjacent(b1, b2):
                return False
        return True

    best = 0

    def rec(start, chosen):
        nonlocal best
        best = max(best, len(chosen))
        for j in range(start, len(cands)):
            if compatible(cands[j], chosen):
                chosen.append(cands[j])
                rec(j + 1, chosen)
                chosen.pop()

    rec(0, [])
    return best


def brute_mim(adjacent, side_a, side_b):
    return brute_max_matching(adjacent, side_a, side_b, False, False)


def brute_sim(adjacent, side_a, side_b):
    return brute_max_matching(adjacent, side_a, side_b, True, True)


def brute_uim(adjacent, vertices, x_side):
    x_set = set(x_side)
    rest = [v for v in vertices if v not in x_set]
    return brute_max_matching(adjacent, sorted(x_set), rest, True, False)


def random_weighted_graph(rng: random.Random, n, p=0.5, max_w=5) -> WeightedGraph:
    g = WeightedGraph()
    for i in range(n):
        g.add_vertex(f"v{i}")
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v, rng.randint(1, max_w))
    return g


def random_graph_adj(rng: random.Random, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return adjacency_sets(n, edges)


def path_graph(weights) -> WeightedGraph:
    g = WeightedGraph()
    for i in range(len(weights) + 1):
        g.add_vertex(f"p{i}")
    for i, w in enumerate(weights):
        g.add_edge(i, i + 1, w)
    return g


def star_graph(leaf_weights) -> WeightedGraph:
    g = WeightedGraph()
    g.add_vertex("center")
    for i, w in enumerate(leaf_weights):
        leaf = g.add_vertex(f"leaf{i}")
        g.add_edge(0, leaf, w)
    return g


@pytest.fixture
def rng():
    return random.Random(20240831)

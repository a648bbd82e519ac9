"""Single audited kernel for maximum (semi-)induced matchings across a cut.

Every matching variant used by the pipeline is the same search with a
different conflict oracle:

  mim       -- conflicts via cut edges only (bipartite cut graph),
  sim       -- conflicts via every graph edge, both sides included,
  uim(X)    -- conflicts via cut edges plus edges inside X.

A candidate set of cut edges is a valid matching iff it is a clique in the
*compatibility graph* (pairwise disjoint endpoints, no conflicting
adjacency), so the search is a Tomita-style maximum-clique branch and bound
over bitsets, with optional threshold-mode early exit.
"""

from __future__ import annotations

from .errors import BudgetExceededError

DEFAULT_BUDGET = 10 ** 7


class _ThresholdHit(Exception):
    pass


def cut_edges(adjacent, side_a, side_b):
    """All (a, b) pairs with a in A, b in B that are adjacent."""
    return [(a, b) for a in side_a for b in side_b if adjacent(a, b)]


def compatibility_masks(adjacent, candidates, conflict_in_a, conflict_in_b):
    """Bitmask adjacency of the compatibility graph over candidate cut edges."""
    m = len(candidates)
    masks = [0] * m
    for i in range(m):
        a1, b1 = candidates[i]
        for j in range(i + 1, m):
            a2, b2 = candidates[j]
            if a1 == a2 or b1 == b2:
                continue
            if adjacent(a1, b2) or adjacent(a2, b1):
                continue
            if conflict_in_a and adjacent(a1, a2):
                continue
            if conflict_in_b and adjacent(b1, b2):
                continue
            masks[i] |= 1 << j
            masks[j] |= 1 << i
    return masks


def max_clique(masks, threshold=None, budget: int = DEFAULT_BUDGET, stats=None):
    """Maximum clique size via branch and bound with a greedy colouring bound.

    Returns (size, exact).  With a threshold, stops as soon as a clique of
    that size is found and reports (threshold, False).  Raises
    BudgetExceededError when the node budget runs out.  When given, `stats`
    accumulates the explored node count under the "nodes" key.
    """
    m = len(masks)
    if m == 0:
        return 0, True
    best = 0
    nodes = 0
    full = (1 << m) - 1

    def colour_order(p):
        order = []
        bounds = []
        colour = 0
        while p:
            colour += 1
            q = p
            while q:
                v = (q & -q).bit_length() - 1
                bit = 1 << v
                p &= ~bit
                q &= ~bit & ~masks[v]
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(size, p):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceededError(f"matching search exceeded {budget} nodes")
        order, bounds = colour_order(p)
        for i in range(len(order) - 1, -1, -1):
            if size + bounds[i] <= best:
                return
            v = order[i]
            if size + 1 > best:
                best = size + 1
                if threshold is not None and best >= threshold:
                    raise _ThresholdHit
            sub = p & masks[v]
            if sub:
                expand(size + 1, sub)
            p &= ~(1 << v)

    try:
        expand(0, full)
    except _ThresholdHit:
        return best, False
    finally:
        if stats is not None:
            stats["nodes"] = stats.get("nodes", 0) + nodes
    return best, True


def max_induced_matching(adjacent, side_a, side_b, conflict_in_a, conflict_in_b,
                         threshold=None, budget: int = DEFAULT_BUDGET, stats=None):
    """Size of a maximum compatible set of cut edges between A and B.

    Returns (value, exact); exact is False only when a threshold stopped the
    search early, in which case value == threshold is a lower bound.
    """
    candidates = cut_edges(adjacent, side_a, side_b)
    if threshold is not None and threshold <= 0:
        return 0, len(candidates) == 0
    masks = compatibility_masks(adjacent, candidates, conflict_in_a, conflict_in_b)
    return max_clique(masks, threshold=threshold, budget=budget, stats=stats)


def adjacency_from_sets(adj_sets):
    """Adapt {vertex: set(neighbors)} into a pair-adjacency callable."""
    return lambda u, v: v in adj_sets[u]

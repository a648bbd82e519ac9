"""Branch-decomposition width machinery: mim/sim/omim values of tree
layouts, the upper-induced matching number, and exhaustive exact-width
oracles for tiny graphs.

General layouts are unrooted ternary trees with graph vertices on the
leaves; linear layouts are rooted full binary caterpillars, equivalently a
vertex order.  Exact widths enumerate all layouts: vertex orders via a
subset DP, ternary trees via leaf insertion (their count is (2L-5)!!).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CapExceededError, ValidationError
from .matchings import DEFAULT_BUDGET, max_induced_matching

GENERAL_CAP = 8
LINEAR_CAP = 10

_KIND_SIDES = {"mim": (False, False), "sim": (True, True)}


@dataclass
class TreeLayout:
    """Tree with graph vertices bijectively on its leaves.

    General layouts have every internal node of degree 3; linear layouts are
    the canonical left-aligned caterpillar of a vertex order (spine
    p_1..p_{N-1}, leaf l_j under p_j, and l_N also under p_{N-1}).
    """

    tree_adj: dict          # node -> [node]
    leaf_vertex: dict       # leaf node -> graph vertex
    linear: bool = False
    leaf_order: list = field(default=None)

    def __post_init__(self):
        leaves = {x for x, nbrs in self.tree_adj.items() if len(nbrs) <= 1}
        if set(self.leaf_vertex) != leaves:
            raise ValidationError("leaf map must cover exactly the tree leaves")
        if len(set(self.leaf_vertex.values())) != len(self.leaf_vertex):
            raise ValidationError("leaf map is not injective")
        if not self.linear:
            for x, nbrs in self.tree_adj.items():
                if len(nbrs) not in (1, 3) and len(self.tree_adj) > 1:
                    raise ValidationError(f"internal node {x} has degree {len(nbrs)}")

    def edges(self):
        for x, nbrs in self.tree_adj.items():
            for y in nbrs:
                if x < y:
                    yield x, y

    def cuts(self):
        """Yield ((x, y), A) where A is the leaf set on y's side of the edge."""
        for x, y in self.edges():
            seen = {y}
            stack = [y]
            while stack:
                a = stack.pop()
                for b in self.tree_adj[a]:
                    if b != x and b not in seen:
                        seen.add(b)
                        stack.append(b)
            yield (x, y), frozenset(self.leaf_vertex[n] for n in seen if n in self.leaf_vertex)


def linear_layout_from_order(order) -> TreeLayout:
    """Canonical caterpillar realization of a vertex order."""
    n = len(order)
    if n == 0:
        raise ValidationError("empty order")
    if n == 1:
        return TreeLayout(tree_adj={0: []}, leaf_vertex={0: order[0]},
                          linear=True, leaf_order=list(order))
    if n == 2:
        adj = {0: [1, 2], 1: [0], 2: [0]}
        return TreeLayout(tree_adj=adj, leaf_vertex={1: order[0], 2: order[1]},
                          linear=True, leaf_order=list(order))
    # spine nodes 0..n-2; leaf j sits at node n-1+j
    adj = {i: [] for i in range(2 * n - 1)}
    for i in range(n - 2):
        adj[i].append(i + 1)
        adj[i + 1].append(i)
    leaf_vertex = {}
    for j in range(n):
        spine = min(j, n - 2)
        leaf = n - 1 + j
        adj[spine].append(leaf)
        adj[leaf].append(spine)
        leaf_vertex[leaf] = order[j]
    return TreeLayout(tree_adj=adj, leaf_vertex=leaf_vertex, linear=True,
                      leaf_order=list(order))


def uim(adjacent, vertices, x_side, threshold=None, budget: int = DEFAULT_BUDGET,
        stats=None):
    """Upper-induced matching number of X: maximum induced matching between X
    and its complement after deleting the complement's internal edges."""
    x_set = set(x_side)
    rest = [v for v in vertices if v not in x_set]
    value, exact = max_induced_matching(adjacent, sorted(x_set), rest, True, False,
                                        threshold=threshold, budget=budget, stats=stats)
    return value, exact


def cut_value_for_kind(adjacent, vertices, side_a, kind, budget: int = DEFAULT_BUDGET,
                       stats=None):
    """Exact mim/sim/omim value of the bipartition (A, V - A)."""
    a_set = set(side_a)
    side_b = [v for v in vertices if v not in a_set]
    if kind in _KIND_SIDES:
        in_a, in_b = _KIND_SIDES[kind]
        value, _ = max_induced_matching(adjacent, sorted(a_set), side_b,
                                        in_a, in_b, budget=budget, stats=stats)
        return value
    if kind == "omim":
        ua, _ = uim(adjacent, vertices, sorted(a_set), budget=budget, stats=stats)
        ub, _ = uim(adjacent, vertices, side_b, budget=budget, stats=stats)
        return min(ua, ub)
    raise ValidationError(f"unknown width kind {kind!r}")


def layout_value(adjacent, vertices, layout: TreeLayout, kind: str,
                 budget: int = DEFAULT_BUDGET, stats=None):
    """Max cut value over all tree edges of the layout."""
    vertex_set = set(vertices)
    if set(layout.leaf_vertex.values()) != vertex_set:
        raise ValidationError("layout leaves do not match the vertex set")
    best = 0
    for _, side_a in layout.cuts():
        value = cut_value_for_kind(adjacent, vertices, side_a, kind, budget=budget,
                                   stats=stats)
        if value > best:
            best = value
    return best


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def enumerate_leaf_trees(num_leaves: int):
    """All unrooted ternary trees on leaves 0..L-1, one per topology.

    Trees are built by inserting leaf k into every edge of every tree on
    k leaves, which yields each topology exactly once ((2L-5)!! in total).
    Returned as (adj, leaf_nodes) with leaf i at node i and internal nodes
    numbered from L upward.
    """
    if num_leaves < 1:
        return
    if num_leaves == 1:
        yield {0: []}, [0]
        return
    if num_leaves == 2:
        yield {0: [1], 1: [0]}, [0, 1]
        return

    def insert(adj, edge, leaf, internal):
        new = {k: list(v) for k, v in adj.items()}
        x, y = edge
        new[x].remove(y)
        new[y].remove(x)
        new[internal] = [x, y, leaf]
        new[x].append(internal)
        new[y].append(internal)
        new[leaf] = [internal]
        return new

    def rec(adj, next_leaf, next_internal):
        if next_leaf == num_leaves:
            yield adj
            return
        edges = [(x, y) for x in sorted(adj) for y in adj[x] if x < y]
        for edge in edges:
            yield from rec(insert(adj, edge, next_leaf, next_internal),
                           next_leaf + 1, next_internal + 1)

    base = {0: [num_leaves], 1: [num_leaves], 2: [num_leaves], num_leaves: [0, 1, 2]}
    for adj in rec(base, 3, num_leaves + 1):
        yield adj, list(range(num_leaves))


def _cut_table(adjacent, verts, kind, budget, stats=None):
    """Cut value for every vertex-subset bitmask (symmetric in complement)."""
    n = len(verts)
    full = (1 << n) - 1
    table = [0] * (full + 1)
    if kind == "omim":
        uim_table = [0] * (full + 1)
        for mask in range(full + 1):
            side = [verts[i] for i in range(n) if mask >> i & 1]
            uim_table[mask], _ = uim(adjacent, verts, side, budget=budget, stats=stats)
        for mask in range(full + 1):
            table[mask] = min(uim_table[mask], uim_table[full ^ mask])
        return table
    in_a, in_b = _KIND_SIDES[kind]
    for mask in range(full + 1):
        comp = full ^ mask
        if comp < mask:
            table[mask] = table[comp]
            continue
        side_a = [verts[i] for i in range(n) if mask >> i & 1]
        side_b = [verts[i] for i in range(n) if comp >> i & 1]
        table[mask], _ = max_induced_matching(adjacent, side_a, side_b,
                                              in_a, in_b, budget=budget, stats=stats)
    return table


def _linear_exact(table, n):
    """Min over vertex orders of the max cut value, plus the lexicographically
    least optimal order, via a subset DP over suffix completions."""
    full = (1 << n) - 1
    singleton_base = max(table[1 << i] for i in range(n)) if n else 0
    best_from = [0] * (full + 1)  # best achievable max over strict extensions
    for mask in range(full - 1, -1, -1):
        best = None
        for i in range(n):
            if mask >> i & 1:
                continue
            nxt = mask | 1 << i
            cand = max(table[nxt], best_from[nxt])
            if best is None or cand < best:
                best = cand
        best_from[mask] = best if best is not None else 0
    width = max(singleton_base, best_from[0])
    order_idx = []
    mask = 0
    for _ in range(n):
        for i in range(n):
            if mask >> i & 1:
                continue
            nxt = mask | 1 << i
            if max(table[nxt], best_from[nxt]) <= width:
                order_idx.append(i)
                mask = nxt
                break
    return width, order_idx


def exact_width(adjacent, vertices, kind: str, linear: bool = False, cap=None,
                budget: int = DEFAULT_BUDGET, stats=None):
    """Exact width by exhaustive layout enumeration.

    Returns (value, witness TreeLayout).  The witness is deterministic: the
    lexicographically least optimal order for linear layouts, and the
    optimal ternary tree with the least sorted-split serialization otherwise.
    """
    verts = sorted(set(vertices))
    n = len(verts)
    if cap is None:
        cap = LINEAR_CAP if linear else GENERAL_CAP
    if n > cap:
        raise CapExceededError(f"|V| = {n} exceeds exact-width cap {cap}")
    if n == 0:
        raise ValidationError("empty vertex set")
    if n == 1:
        return 0, linear_layout_from_order(verts) if linear else TreeLayout(
            tree_adj={0: []}, leaf_vertex={0: verts[0]})
    table = _cut_table(adjacent, verts, kind, budget, stats=stats)

    if linear:
        width, order_idx = _linear_exact(table, n)
        order = [verts[i] for i in order_idx]
        return width, linear_layout_from_order(order)

    full = (1 << n) - 1
    vbit = {v: i for i, v in enumerate(verts)}
    best = None
    best_key = None
    best_layout = None
    for adj, leaf_nodes in enumerate_leaf_trees(n):
        layout = TreeLayout(tree_adj=adj,
                            leaf_vertex={i: verts[i] for i in leaf_nodes})
        splits = []
        value = 0
        for _, side in layout.cuts():
            mask = 0
            for v in side:
                mask |= 1 << vbit[v]
            splits.append(min(mask, full ^ mask))
            if table[mask] > value:
                value = table[mask]
        key = tuple(sorted(splits))
        if best is None or value < best or (value == best and key < best_key):
            best, best_key, best_layout = value, key, layout
    return best, best_layout


def adjacency_of_graph(g):
    """Pair-adjacency callable and vertex list for a WeightedGraph."""
    sets = [set() for _ in g.vertex_ids()]
    for u, v, _ in g.edges():
        sets[u].add(v)
        sets[v].add(u)
    return (lambda a, b: b in sets[a]), list(g.vertex_ids())

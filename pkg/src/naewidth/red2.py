"""Step 2: from an edge-weighted graph (H, w) to an unweighted partitioned
graph (G, S) whose cut matchings mirror H's weighted degrees.

Every vertex u of H becomes an independent part S(u) split into blocks
I(u, v) of size w(uv); matching edges pair I(u, v) with I(v, u) position by
position, and dummy bicliques join blocks of disjoint H-edges.  G is kept
implicit (block layout + O(1) adjacency oracle): real instances have far too
many dummy edges to materialize.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field

from .errors import ValidationError
from .matchings import DEFAULT_BUDGET, max_induced_matching
from .wgraph import BalancingTree, WeightedGraph


class PartitionedGraph:
    """Implicit (G, S): block layout over H plus an adjacency oracle.

    Blocks are laid out in ascending (u, v), so every part S(u) is a
    contiguous id range.  adjacent(p, q) returns "matching", "dummy", or
    None in O(log #blocks).
    """

    def __init__(self, h: WeightedGraph):
        self.H = h
        self.block_pairs = []   # ordered (u, v) with uv in E(H)
        self.block_start = []   # parallel to block_pairs
        self.block_index = {}
        self.part_range = {}
        nxt = 0
        for u in h.vertex_ids():
            part_start = nxt
            for v, w in sorted(h.adj[u]):
                self.block_index[(u, v)] = len(self.block_pairs)
                self.block_pairs.append((u, v))
                self.block_start.append(nxt)
                nxt += w
            self.part_range[u] = (part_start, nxt)
        self.n = nxt

    def block_of(self, p):
        """(u, v) block containing G-vertex p."""
        if not 0 <= p < self.n:
            raise ValidationError(f"G-vertex {p} out of range")
        k = bisect.bisect_right(self.block_start, p) - 1
        return self.block_pairs[k]

    def owner(self, p):
        return self.block_of(p)[0]

    def block_range(self, u, v):
        k = self.block_index[(u, v)]
        start = self.block_start[k]
        return range(start, start + self.H.edge_weight(u, v))

    def block_position(self, p):
        k = bisect.bisect_right(self.block_start, p) - 1
        return p - self.block_start[k]

    def part_vertices(self, u):
        start, end = self.part_range[u]
        return range(start, end)

    def parts(self):
        return sorted(self.part_range)

    def adjacent(self, p, q):
        """Edge kind between two G-vertices, or None."""
        if p == q:
            return None
        (u, v) = self.block_of(p)
        (x, y) = self.block_of(q)
        if (x, y) == (v, u):
            if self.block_position(p) == self.block_position(q):
                return "matching"
            return None
        if u != x and u != y and v != x and v != y:
            return "dummy"
        return None

    def matching_partner(self, p):
        u, v = self.block_of(p)
        return self.block_range(v, u)[self.block_position(p)]

    def num_matching_edges(self):
        return self.H.total_weight()

    def num_dummy_edges(self):
        edges = list(self.H.edges())
        total = 0
        for (a, b, w1), (x, y, w2) in itertools.combinations(edges, 2):
            if len({a, b, x, y}) == 4:
                total += 4 * w1 * w2  # both orientations of both edges
        return total

    def num_edges(self):
        return self.num_matching_edges() + self.num_dummy_edges()

    def edge_iter(self):
        """Explicit (p, q, kind) edges; only sensible for small instances."""
        for p in range(self.n):
            q = self.matching_partner(p)
            if p < q:
                yield p, q, "matching"
        edges = list(self.H.edges())
        for (a, b, _), (x, y, _) in itertools.combinations(edges, 2):
            if len({a, b, x, y}) != 4:
                continue
            for bu, bv in ((a, b), (b, a)):
                for bx, by in ((x, y), (y, x)):
                    for p in self.block_range(bu, bv):
                        for q in self.block_range(bx, by):
                            yield min(p, q), max(p, q), "dummy"

    def validate(self) -> None:
        """Structural audit of the partitioned-graph invariants."""
        if self.n != 2 * self.H.total_weight():
            raise ValidationError("|V(G)| != 2 * total weight of H")
        covered = 0
        for u in self.parts():
            start, end = self.part_range[u]
            covered += end - start
            blocks = [(v, w) for v, w in sorted(self.H.adj[u])]
            if sum(w for _, w in blocks) != end - start:
                raise ValidationError(f"S({u}) does not decompose into its blocks")
            for v, w in blocks:
                if len(self.block_range(u, v)) != w or len(self.block_range(v, u)) != w:
                    raise ValidationError(f"|I({u},{v})| != w({u}{v}) or mismatched twin")
        if covered != self.n:
            raise ValidationError("parts do not partition V(G)")
        for u in self.parts():
            for p in self.part_vertices(u):
                q = self.matching_partner(p)
                if self.matching_partner(q) != p or self.adjacent(p, q) != "matching":
                    raise ValidationError(f"matching pairing broken at {p}")

    def sample_oracle_check(self, rng, samples: int = 2000) -> None:
        """Spot-check the adjacency oracle against first principles."""
        for _ in range(samples):
            p = rng.randrange(self.n)
            q = rng.randrange(self.n)
            if p == q:
                continue
            u, v = self.block_of(p)
            x, y = self.block_of(q)
            kind = self.adjacent(p, q)
            if u == x:
                if kind is not None:
                    raise ValidationError(f"S({u}) not independent: edge ({p},{q})")
            elif (x, y) == (v, u):
                expect = "matching" if self.block_position(p) == self.block_position(q) else None
                if kind != expect:
                    raise ValidationError(f"matching oracle wrong at ({p},{q})")
            elif {u, v} & {x, y}:
                if kind is not None:
                    raise ValidationError(f"blocks of touching H-edges joined: ({p},{q})")
            elif kind != "dummy":
                raise ValidationError(f"missing dummy edge ({p},{q})")


def build_partitioned(h: WeightedGraph) -> PartitionedGraph:
    """Construct (G, S) from a positively-weighted graph."""
    h.check_simple()
    gs = PartitionedGraph(h)
    gs.validate()
    return gs


_KINDS = {"mim": (False, False), "sim": (True, True)}


def cut_value(adjacent, side_a, side_b, kind: str, threshold=None,
              budget: int = DEFAULT_BUDGET):
    """Exact mim/sim value of the cut (A, B), or a lower-bound stop at the
    threshold.  Returns (value, exact)."""
    if kind not in _KINDS:
        raise ValidationError(f"unknown cut kind {kind!r}")
    set_a, set_b = set(side_a), set(side_b)
    if set_a & set_b:
        raise ValidationError("cut sides overlap")
    in_a, in_b = _KINDS[kind]
    return max_induced_matching(adjacent, sorted(set_a), sorted(set_b),
                                in_a, in_b, threshold=threshold, budget=budget)


@dataclass
class TreeMapping:
    """Tree whose nodes each carry exactly one part of the partition."""

    tree_adj: dict           # node -> [node]
    part_at: dict            # node -> part key (H vertex / gadget owner)
    is_path: bool = False
    node_of: dict = field(init=False)

    def __post_init__(self):
        nodes = set(self.tree_adj)
        if set(self.part_at) != nodes:
            raise ValidationError("part placement does not cover the tree nodes")
        if len(set(self.part_at.values())) != len(nodes):
            raise ValidationError("part placement is not a bijection")
        self.node_of = {part: node for node, part in self.part_at.items()}
        if self.is_path and any(len(v) > 2 for v in self.tree_adj.values()):
            raise ValidationError("path flag set but tree has a degree-3 node")

    def edges(self):
        for x, nbrs in self.tree_adj.items():
            for y in nbrs:
                if x < y:
                    yield x, y

    def side_parts(self, x, y):
        """Part keys mapped to y's side of tree edge (x, y)."""
        seen = {y}
        stack = [y]
        while stack:
            a = stack.pop()
            for b in self.tree_adj[a]:
                if b != x and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return [self.part_at[node] for node in sorted(seen)]


def mapping_cut(gs, mapping: TreeMapping, edge):
    """The S-cut (A, B) of G induced by a tree edge of the mapping."""
    x, y = edge
    if y not in mapping.tree_adj.get(x, ()):
        raise ValidationError(f"{edge} is not a tree edge")
    parts_b = set(mapping.side_parts(x, y))
    side_a, side_b = [], []
    for u in mapping.part_at.values():
        target = side_b if u in parts_b else side_a
        target.extend(gs.part_vertices(u))
    return side_a, side_b


def mapping_value(gs, mapping: TreeMapping, kind: str, threshold=None,
                  budget: int = DEFAULT_BUDGET):
    """Max cut value over the mapping's tree edges.  Returns (value, exact)."""
    best = 0
    exact = True
    for edge in mapping.edges():
        side_a, side_b = mapping_cut(gs, mapping, edge)
        value, is_exact = cut_value(gs.adjacent, side_a, side_b, kind,
                                    threshold=threshold, budget=budget)
        if value > best:
            best = value
        exact = exact and is_exact
        if threshold is not None and best >= threshold:
            return best, False
    return best, exact


def path_mapping_from_order(gs, order) -> TreeMapping:
    """Path mapping S(v_i) -> p_i from an order on V(H)."""
    if sorted(order) != gs.parts():
        raise ValidationError("order does not cover the parts' H-vertices")
    n = len(order)
    adj = {i: [] for i in range(n)}
    for i in range(n - 1):
        adj[i].append(i + 1)
        adj[i + 1].append(i)
    return TreeMapping(tree_adj=adj, part_at={i: u for i, u in enumerate(order)},
                       is_path=True)


def balancing_tree_from_mapping(h: WeightedGraph, mapping: TreeMapping) -> BalancingTree:
    """Reuse the mapping's tree for H itself: vertex v sits where S(v) sits."""
    return BalancingTree(tree_adj={k: list(v) for k, v in mapping.tree_adj.items()},
                         placement=dict(mapping.node_of))

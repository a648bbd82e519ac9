"""Step 3: from the partitioned graph (G, S) to the final width instance G*.

Each part S(u) becomes a gadget: the blocks of S(u) are split into `a` equal
chunks, laid out as a path, 1-subdivided with one trailing vertex appended
(so |V(P_u)| = 2|S(u)|), and concatenated into b quasi-copies that are
densely interconnected except around corresponding positions.  Inter-gadget
edges are bicliques between the copy sets of G-adjacent originals.

The hybrid-tree machinery relocates whole gadgets onto subdivided layout
edges and contracts the result down to a tree mapping of (G*, S*), which
projects back to a tree mapping of (G, S).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from .errors import ValidationError
from .matchings import DEFAULT_BUDGET
from .red1 import Constants, validate_constants
from .red2 import PartitionedGraph, TreeMapping, cut_value
from .widths import TreeLayout, linear_layout_from_order


@dataclass
class Gadget:
    """One part gadget: b copies of the subdivided block path P_u."""

    owner: int
    path: list        # [(tag, G-vertex id or None)] of length 2|S(u)|
    copies: int
    base: int = 0     # first G*-vertex id of this gadget

    @property
    def plen(self):
        return len(self.path)

    @property
    def size(self):
        return self.copies * len(self.path)

    def vid(self, copy, pos):
        return self.base + copy * self.plen + pos

    def locate(self, vid):
        off = vid - self.base
        return divmod(off, self.plen)

    def copies_of(self, pos):
        return [self.vid(i, pos) for i in range(self.copies)]

    def copy_vertices(self, copy):
        start = self.base + copy * self.plen
        return range(start, start + self.plen)

    def intercopy_edge(self, copy_i, p, copy_j, q):
        """Edge rule between positions of two distinct copies: everything is
        joined except corresponding positions, their path neighbors, and the
        copy-boundary successors/predecessors (symmetrized closed
        neighborhood of the copy set in the concatenated path)."""
        if copy_i == copy_j:
            raise ValidationError("intercopy rule queried within one copy")
        if abs(p - q) <= 1:
            return False
        last = self.plen - 1
        if p == 0 and q == last:
            return copy_i == 0 and copy_j == self.copies - 1
        if p == last and q == 0:
            return copy_j == 0 and copy_i == self.copies - 1
        return True

    def is_concatenation_edge(self, ci, p, cj, q):
        """The Q_u path edge joining consecutive copies."""
        last = self.plen - 1
        return (ci + 1 == cj and p == last and q == 0) or \
               (cj + 1 == ci and q == last and p == 0)

    def adjacent(self, x, y):
        ci, p = self.locate(x)
        cj, q = self.locate(y)
        if ci == cj:
            return abs(p - q) == 1
        if self.is_concatenation_edge(ci, p, cj, q):
            return True
        if p == q:
            return False
        return self.intercopy_edge(ci, p, cj, q)


def build_Pu(gs: PartitionedGraph, u, c: Constants) -> list:
    """The path P_u as a [(tag, G-vertex)] list.

    Blocks I(u, v) are split into a chunks; chunk i concatenates the i-th
    slice of every block in ascending neighbor order; the full original
    sequence is 1-subdivided and one vertex is appended after the end.
    """
    validate_constants(c)
    if u not in gs.part_range:
        raise ValidationError(f"{u} is not an H-vertex of the partition")
    neighbors = sorted(v for v, _ in gs.H.adj[u])
    for v in neighbors:
        if len(gs.block_range(u, v)) % c.a != 0:
            raise ValidationError(
                f"|I({u},{v})| = {len(gs.block_range(u, v))} not divisible by a = {c.a}")
    originals = []
    for i in range(c.a):
        for v in neighbors:
            block = gs.block_range(u, v)
            chunk = len(block) // c.a
            originals.extend(block[i * chunk:(i + 1) * chunk])
    path = []
    for idx, gv in enumerate(originals):
        path.append(("original", gv))
        if idx < len(originals) - 1:
            path.append(("subdivision", None))
    path.append(("appended", None))
    return path


def build_gadget(gs: PartitionedGraph, u, c: Constants) -> Gadget:
    """Gadget of u: b concatenated quasi-copies of P_u."""
    if c.b < 1:
        raise ValidationError("b must be at least 1")
    return Gadget(owner=u, path=build_Pu(gs, u, c), copies=c.b)


class Gstar:
    """Implicit G*: the gadget registry plus an O(1) adjacency oracle.

    Gadgets occupy contiguous id ranges in ascending owner order; S* maps
    each owner to its gadget's vertex range.  Inter-gadget edges join
    original-tagged vertices whose G-originals are adjacent, inheriting the
    matching/dummy kind.
    """

    def __init__(self, gs: PartitionedGraph, c: Constants):
        self.GS = gs
        self.constants = c
        self.gadgets = {}
        base = 0
        for u in gs.parts():
            gadget = build_gadget(gs, u, c)
            gadget.base = base
            base += gadget.size
            self.gadgets[u] = gadget
        self.n = base
        self._owners = sorted(self.gadgets)
        self._bases = [self.gadgets[u].base for u in self._owners]

    def owner_of(self, vid):
        if not 0 <= vid < self.n:
            raise ValidationError(f"G*-vertex {vid} out of range")
        k = bisect.bisect_right(self._bases, vid) - 1
        return self._owners[k]

    def locate(self, vid):
        """(owner, copy, position, tag, original G-vertex or None)."""
        u = self.owner_of(vid)
        gadget = self.gadgets[u]
        copy, pos = gadget.locate(vid)
        tag, gv = gadget.path[pos]
        return u, copy, pos, tag, gv

    def part_vertices(self, u):
        gadget = self.gadgets[u]
        return range(gadget.base, gadget.base + gadget.size)

    def parts(self):
        return list(self._owners)

    def adjacent(self, x, y):
        """Edge kind between two G*-vertices ("path", "cross", "matching",
        "dummy"), or None."""
        if x == y:
            return None
        ux, uy = self.owner_of(x), self.owner_of(y)
        if ux == uy:
            gadget = self.gadgets[ux]
            if not gadget.adjacent(x, y):
                return None
            ci, p = gadget.locate(x)
            cj, q = gadget.locate(y)
            if ci == cj or gadget.is_concatenation_edge(ci, p, cj, q):
                return "path"
            return "cross"
        _, _, _, tag_x, gx = self.locate(x)
        _, _, _, tag_y, gy = self.locate(y)
        if gx is None or gy is None:
            return None
        return self.GS.adjacent(gx, gy)

    def validate(self) -> None:
        for u, gadget in self.gadgets.items():
            if gadget.plen != 2 * len(self.GS.part_vertices(u)):
                raise ValidationError(f"|V(P_{u})| != 2|S({u})|")
            originals = [gv for tag, gv in gadget.path if tag == "original"]
            if sorted(originals) != list(self.GS.part_vertices(u)):
                raise ValidationError(f"P_{u} originals do not cover S({u})")
            tags = [tag for tag, _ in gadget.path]
            if tags[-1] != "appended" or any(
                    t != ("original" if i % 2 == 0 else "subdivision")
                    for i, t in enumerate(tags[:-1])):
                raise ValidationError(f"P_{u} does not alternate original/subdivision")


def build_Gstar(gs: PartitionedGraph, c: Constants) -> Gstar:
    validate_constants(c)
    star = Gstar(gs, c)
    star.validate()
    return star


def ensure_divisible(gs: PartitionedGraph, c: Constants):
    """Make every block size a multiple of a by globally scaling H's weights.

    The step-1 graphs carry unit-grain weights (gamma+1 links, weight-1
    padding edges), so the gadget stage scales all edge weights by a first;
    balancing thresholds scale along exactly.  Returns (partitioned graph,
    applied factor), with factor 1 when no scaling was needed.
    """
    from .red2 import build_partitioned
    from .wgraph import scale_weights

    if all(w % c.a == 0 for _, _, w in gs.H.edges()):
        return gs, 1
    return build_partitioned(scale_weights(gs.H, c.a)), c.a


def caterpillar_layout(star: Gstar, h_order) -> TreeLayout:
    """Linear layout of G* with leaves in Q_{u_1}..Q_{u_n} order along the
    given order of the gadget owners."""
    if sorted(h_order) != star.parts():
        raise ValidationError("order does not cover the gadget owners")
    leaves = []
    for u in h_order:
        leaves.extend(star.part_vertices(u))
    return linear_layout_from_order(leaves)


@dataclass
class HybridTree:
    """Subcubic tree whose nodes hold either a whole gadget or one vertex."""

    tree_adj: dict
    node_of: dict            # G*-vertex -> node
    preimages: dict = field(init=False)

    def __post_init__(self):
        self.preimages = {node: set() for node in self.tree_adj}
        for v, node in self.node_of.items():
            self.preimages[node].add(v)

    def edges(self):
        for x, nbrs in self.tree_adj.items():
            for y in nbrs:
                if x < y:
                    yield x, y

    def check_shape(self, star: Gstar) -> None:
        for x, nbrs in self.tree_adj.items():
            if len(nbrs) > 3:
                raise ValidationError(f"node {x} has degree {len(nbrs)} > 3")
        parts = {u: set(star.part_vertices(u)) for u in star.parts()}
        for node, pre in self.preimages.items():
            if len(pre) <= 1:
                continue
            u = star.owner_of(next(iter(pre)))
            if pre != parts[u]:
                raise ValidationError(f"node {node} holds a strict partial gadget")

    def side_vertices(self, x, y):
        """G*-vertices mapped to y's side of tree edge (x, y)."""
        seen = {y}
        stack = [y]
        while stack:
            a = stack.pop()
            for b in self.tree_adj[a]:
                if b != x and b not in seen:
                    seen.add(b)
                    stack.append(b)
        return [v for v, node in self.node_of.items() if node in seen]


def hybrid_from_layout(layout: TreeLayout) -> HybridTree:
    """A tree layout is already a hybrid tree: leaves hold one vertex each."""
    return HybridTree(tree_adj={k: list(v) for k, v in layout.tree_adj.items()},
                      node_of={v: leaf for leaf, v in layout.leaf_vertex.items()})


def hybrid_cut_sides(ht: HybridTree, star: Gstar, edge):
    x, y = edge
    side_b = set(ht.side_vertices(x, y))
    side_a = [v for v in range(star.n) if v not in side_b]
    return side_a, sorted(side_b)


def hybrid_sim_values(ht: HybridTree, star: Gstar, budget: int = DEFAULT_BUDGET):
    """Exact sim value per tree edge, keyed by the edge."""
    out = {}
    for edge in ht.edges():
        side_a, side_b = hybrid_cut_sides(ht, star, edge)
        value, _ = cut_value(star.adjacent, side_a, side_b, "sim", budget=budget)
        out[edge] = value
    return out


class DefaultEdgeNotFound(ValidationError):
    """No node holds the gadget and no tree edge has a whole copy of P_u on
    both sides; the sim-value assumption behind relocation was violated."""


def find_default_edge(star: Gstar, ht: HybridTree, u):
    """Either ("node", t) with preimage V(G(u))), or ("edge", (x, y)) with a
    whole copy of P_u on both sides; deterministic BFS scan from the
    minimum-id node."""
    gadget = star.gadgets[u]
    whole = set(star.part_vertices(u))
    for node in sorted(ht.tree_adj):
        if ht.preimages[node] == whole:
            return "node", node
    copies = [set(gadget.copy_vertices(i)) for i in range(gadget.copies)]
    root = min(ht.tree_adj)
    seen = {root}
    queue = [root]
    bfs_edges = []
    while queue:
        x = queue.pop(0)
        for y in sorted(ht.tree_adj[x]):
            if y not in seen:
                seen.add(y)
                queue.append(y)
                bfs_edges.append((x, y))
    for x, y in bfs_edges:
        side_b = set(ht.side_vertices(x, y))
        has_b = any(cp <= side_b for cp in copies)
        has_a = any(not (cp & side_b) for cp in copies)
        if has_a and has_b:
            return "edge", (x, y)
    raise DefaultEdgeNotFound(f"no default node or edge for gadget of {u}")


def group_gadget(star: Gstar, ht: HybridTree, u) -> HybridTree:
    """Relocate all of V(G(u)) onto the default edge, subdividing it.

    Identity when some node already holds the whole gadget; the result stays
    a subcubic hybrid tree and (by exact recomputation in tests) its per-edge
    sim values never increase.
    """
    kind, where = find_default_edge(star, ht, u)
    if kind == "node":
        return ht
    x, y = where
    new_node = max(ht.tree_adj) + 1
    adj = {k: list(v) for k, v in ht.tree_adj.items()}
    adj[x].remove(y)
    adj[y].remove(x)
    adj[new_node] = [x, y]
    adj[x].append(new_node)
    adj[y].append(new_node)
    node_of = dict(ht.node_of)
    for v in star.part_vertices(u):
        node_of[v] = new_node
    return HybridTree(tree_adj=adj, node_of=node_of)


def group_all(star: Gstar, ht: HybridTree) -> HybridTree:
    """Group every gadget, owners in ascending id order."""
    for u in star.parts():
        ht = group_gadget(star, ht, u)
    return ht


def hybrid_to_tree_mapping(star: Gstar, ht: HybridTree) -> TreeMapping:
    """Contract part-next-to-empty edges until every node holds one part."""
    part_sets = {u: set(star.part_vertices(u)) for u in star.parts()}
    owner_at = {}
    for node, pre in ht.preimages.items():
        if not pre:
            owner_at[node] = None
            continue
        u = star.owner_of(next(iter(pre)))
        if pre != part_sets[u]:
            raise ValidationError(
                f"node {node} holds a strict partial preimage; grouping incomplete")
        owner_at[node] = u

    adj = {k: set(v) for k, v in ht.tree_adj.items()}
    changed = True
    while changed:
        changed = False
        for x in sorted(adj):
            if owner_at.get(x) is None:
                continue
            for y in sorted(adj[x]):
                if owner_at.get(y) is None:
                    # contract (x, y): y's neighbors transfer to x
                    for z in adj[y]:
                        if z != x:
                            adj[z].discard(y)
                            adj[z].add(x)
                            adj[x].add(z)
                    adj[x].discard(y)
                    del adj[y]
                    del owner_at[y]
                    changed = True
                    break
            if changed:
                break
    if any(owner is None for owner in owner_at.values()):
        raise ValidationError("empty nodes remain after contraction")
    return TreeMapping(tree_adj={k: sorted(v) for k, v in adj.items()},
                       part_at=owner_at)


def project_mapping_to_G(gs: PartitionedGraph, mapping: TreeMapping) -> TreeMapping:
    """Rename each part V(G(u)) of a (G*, S*) mapping to S(u) over (G, S).

    The tree is unchanged; part keys are already the owners, so this is a
    re-validation against the base partition."""
    if sorted(mapping.part_at.values()) != gs.parts():
        raise ValidationError("mapping parts do not cover the base partition")
    return TreeMapping(tree_adj={k: list(v) for k, v in mapping.tree_adj.items()},
                       part_at=dict(mapping.part_at), is_path=mapping.is_path)

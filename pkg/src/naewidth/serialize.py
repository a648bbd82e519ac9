"""JSON documents for every pipeline artifact.

All emitters produce canonical JSON (sorted keys, compact separators, one
trailing newline) so that reruns are byte-identical.  Step-2 and step-3
graphs are stored structurally (block layout, gadget registry): their edge
sets are bicliques that blow up quadratically, so explicit edge arrays are
only materialized below a small size limit.
"""

from __future__ import annotations

import json

from .errors import ValidationError
from .red1 import Constants, HBuild, BottleneckHandle, SequenceHandles, validate_constants
from .red2 import PartitionedGraph, TreeMapping, build_partitioned
from .red3 import Gstar, HybridTree, build_Gstar
from .wgraph import ROLES, BalancingTree, WeightedGraph
from .widths import TreeLayout

FORMAT_VERSION = 1
EXPLICIT_EDGE_VERTEX_LIMIT = 150
EXPLICIT_EDGE_LIMIT = 5000


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _expect(doc, kind):
    if not isinstance(doc, dict) or doc.get("kind") != kind:
        raise ValidationError(f"expected a {kind!r} document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {doc.get('format_version')!r}")


# -- weighted graphs ---------------------------------------------------------

def weighted_graph_doc(g: WeightedGraph, meta=None):
    g.check_simple()
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "weighted_graph",
        "vertices": [{"id": v, "label": g.labels[v], "role": g.roles[v]}
                     for v in g.vertex_ids()],
        "edges": [{"u": u, "v": v, "weight": w} for u, v, w in sorted(g.edges())],
    }
    if meta is not None:
        doc["meta"] = meta
    return doc


def weighted_graph_from_doc(doc) -> WeightedGraph:
    _expect(doc, "weighted_graph")
    g = WeightedGraph()
    for i, rec in enumerate(doc["vertices"]):
        if rec["id"] != i:
            raise ValidationError("vertex ids must be dense from 0")
        if rec["role"] not in ROLES:
            raise ValidationError(f"unknown role {rec['role']!r}")
        g.add_vertex(rec["label"], rec["role"])
    for rec in doc["edges"]:
        u, v, w = rec["u"], rec["v"], rec["weight"]
        if not (0 <= u < g.n and 0 <= v < g.n):
            raise ValidationError(f"edge ({u}, {v}) references unknown vertex")
        g.add_edge(u, v, w)
    g.check_simple()
    return g


def graph_doc(adj_sets, labels=None):
    """Unweighted graph document from {vertex: set(neighbors)} adjacency."""
    n = len(adj_sets)
    return {
        "format_version": FORMAT_VERSION,
        "kind": "graph",
        "vertices": [{"id": v, "label": labels[v] if labels else "", "role": "plain"}
                     for v in range(n)],
        "edges": [{"u": u, "v": v} for u in range(n) for v in sorted(adj_sets[u])
                  if u < v],
    }


def graph_from_doc(doc):
    """Adjacency sets of an unweighted (or weighted, weights ignored) graph."""
    if not isinstance(doc, dict) or doc.get("kind") not in ("graph", "weighted_graph"):
        raise ValidationError("expected a graph or weighted_graph document")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {doc.get('format_version')!r}")
    n = len(doc["vertices"])
    for i, rec in enumerate(doc["vertices"]):
        if rec["id"] != i:
            raise ValidationError("vertex ids must be dense from 0")
    adj = {v: set() for v in range(n)}
    for rec in doc["edges"]:
        u, v = rec["u"], rec["v"]
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ValidationError(f"bad edge ({u}, {v})")
        if doc["kind"] == "weighted_graph" and "weight" not in rec:
            raise ValidationError(f"weighted graph edge ({u}, {v}) lacks a weight")
        adj[u].add(v)
        adj[v].add(u)
    return adj


# -- step-1 build ------------------------------------------------------------

def _constants_doc(c: Constants):
    return {"tau": c.tau, "gamma": c.gamma, "lambda": c.lam, "a": c.a, "b": c.b}


def constants_from_doc(doc) -> Constants:
    c = Constants(tau=doc["tau"], gamma=doc["gamma"], lam=doc["lambda"],
                  a=doc["a"], b=doc["b"])
    validate_constants(c)
    return c


def _handle_doc(h: BottleneckHandle):
    return {"spine_a": h.spine_a, "spine_b": h.spine_b,
            "terminals": h.terminals, "attach_weights": h.attach_weights}


def _handle_from_doc(doc) -> BottleneckHandle:
    return BottleneckHandle(spine_a=list(doc["spine_a"]), spine_b=list(doc["spine_b"]),
                            terminals=list(doc["terminals"]),
                            attach_weights=list(doc["attach_weights"]))


def hbuild_doc(build: HBuild):
    seq = build.seq
    meta = {
        "constants": _constants_doc(build.constants),
        "num_vars": build.num_vars,
        "num_clauses": build.num_clauses,
        "groups": {
            "vx": build.vx, "vbar": build.vbar,
            "T": build.tvert, "T_bar": build.tbar,
            "F": build.fvert, "F_bar": build.fbar,
            "C": build.cvert,
            "s": seq.s,
            "X": build.x_ids, "Y": build.y_ids,
            "roots": build.roots,
        },
        "sequence": {
            "s": seq.s,
            "B1p": _handle_doc(seq.b1p), "B2p": _handle_doc(seq.b2p),
            "B2m": _handle_doc(seq.b2m), "B3m": _handle_doc(seq.b3m),
            "terminal_sets": seq.terminal_sets,
        },
        "hprime_n": build.hprime_n,
        "pad_assign": sorted([v, xs] for v, xs in build.pad_assign.items()),
        "BL": _handle_doc(build.bl),
        "BR": _handle_doc(build.br),
        "provenance": "step1",
    }
    return weighted_graph_doc(build.graph, meta=meta)


def hbuild_from_doc(doc) -> HBuild:
    g = weighted_graph_from_doc(doc)
    meta = doc.get("meta")
    if not meta or meta.get("provenance") != "step1":
        raise ValidationError("weighted-graph document has no step1 build metadata")
    c = constants_from_doc(meta["constants"])
    groups = meta["groups"]
    seq_doc = meta["sequence"]
    seq = SequenceHandles(
        s=list(seq_doc["s"]),
        b1p=_handle_from_doc(seq_doc["B1p"]), b2p=_handle_from_doc(seq_doc["B2p"]),
        b2m=_handle_from_doc(seq_doc["B2m"]), b3m=_handle_from_doc(seq_doc["B3m"]),
        terminal_sets=[list(s) for s in seq_doc["terminal_sets"]],
    )
    hprime_n = meta["hprime_n"]
    return HBuild(
        graph=g, constants=c,
        num_vars=meta["num_vars"], num_clauses=meta["num_clauses"],
        vx=list(groups["vx"]), vbar=list(groups["vbar"]),
        tvert=list(groups["T"]), tbar=list(groups["T_bar"]),
        fvert=list(groups["F"]), fbar=list(groups["F_bar"]),
        cvert=list(groups["C"]), seq=seq,
        hprime_n=hprime_n,
        hprime_weights=[sum(w for u, w in g.adj[v] if u < hprime_n)
                        for v in range(hprime_n)],
        pad_assign={v: list(xs) for v, xs in meta["pad_assign"]},
        x_ids=list(groups["X"]), y_ids=list(groups["Y"]),
        bl=_handle_from_doc(meta["BL"]), br=_handle_from_doc(meta["BR"]),
    )


# -- step-2 partitioned graphs ----------------------------------------------

def partitioned_doc(gs: PartitionedGraph, base_meta=None):
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "partitioned_graph",
        "base": weighted_graph_doc(gs.H, meta=base_meta),
        "num_vertices": gs.n,
        "parts": [{"owner": u, "start": gs.part_range[u][0],
                   "size": gs.part_range[u][1] - gs.part_range[u][0]}
                  for u in gs.parts()],
        "blocks": [{"u": u, "v": v, "start": gs.block_start[k],
                    "size": gs.H.edge_weight(u, v)}
                   for k, (u, v) in enumerate(gs.block_pairs)],
        "edge_rule": "blocks-v1",
    }
    if gs.n <= EXPLICIT_EDGE_VERTEX_LIMIT and gs.num_edges() <= EXPLICIT_EDGE_LIMIT:
        doc["edges"] = [{"u": p, "v": q, "kind": kind}
                        for p, q, kind in sorted(gs.edge_iter())]
    return doc


def partitioned_from_doc(doc) -> PartitionedGraph:
    _expect(doc, "partitioned_graph")
    h = weighted_graph_from_doc(doc["base"])
    gs = build_partitioned(h)
    if gs.n != doc["num_vertices"]:
        raise ValidationError("stored vertex count disagrees with the block layout")
    stored = [(b["u"], b["v"], b["start"], b["size"]) for b in doc["blocks"]]
    actual = [(u, v, gs.block_start[k], h.edge_weight(u, v))
              for k, (u, v) in enumerate(gs.block_pairs)]
    if stored != actual:
        raise ValidationError("stored block layout disagrees with the rebuild")
    return gs


# -- step-3 gadget graphs ----------------------------------------------------

def gstar_doc(star: Gstar, base_meta=None, weight_scale: int = 1):
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": "gadget_graph",
        "base": partitioned_doc(star.GS, base_meta=base_meta),
        "constants": _constants_doc(star.constants),
        "weight_scale": weight_scale,
        "num_vertices": star.n,
        "gadgets": [
            {"owner": u,
             "base": star.gadgets[u].base,
             "copies": star.gadgets[u].copies,
             "path": [{"tag": tag, "gvid": gv} for tag, gv in star.gadgets[u].path]}
            for u in star.parts()
        ],
    }
    if star.n <= EXPLICIT_EDGE_VERTEX_LIMIT:
        edges = [{"u": x, "v": y, "kind": star.adjacent(x, y)}
                 for x in range(star.n) for y in range(x + 1, star.n)
                 if star.adjacent(x, y)]
        if len(edges) <= EXPLICIT_EDGE_LIMIT:
            doc["edges"] = edges
    return doc


def gstar_from_doc(doc) -> Gstar:
    _expect(doc, "gadget_graph")
    gs = partitioned_from_doc(doc["base"])
    c = constants_from_doc(doc["constants"])
    star = build_Gstar(gs, c)
    if star.n != doc["num_vertices"]:
        raise ValidationError("stored G* vertex count disagrees with the rebuild")
    for rec in doc["gadgets"]:
        gadget = star.gadgets.get(rec["owner"])
        if gadget is None or gadget.base != rec["base"] or gadget.copies != rec["copies"]:
            raise ValidationError(f"gadget registry mismatch at owner {rec['owner']}")
        if [{"tag": t, "gvid": gv} for t, gv in gadget.path] != rec["path"]:
            raise ValidationError(f"gadget path mismatch at owner {rec['owner']}")
    return star


# -- witnesses ----------------------------------------------------------------

def order_doc(order):
    return {"format_version": FORMAT_VERSION, "kind": "order",
            "sequence": list(order)}


def order_from_doc(doc):
    _expect(doc, "order")
    return list(doc["sequence"])


def assignment_doc(assignment):
    return {"format_version": FORMAT_VERSION, "kind": "assignment",
            "values": ["T" if b else "F" for b in assignment]}


def assignment_from_doc(doc):
    _expect(doc, "assignment")
    return tuple(v == "T" for v in doc["values"])


def _edges_doc(adj):
    return sorted([x, y] for x in adj for y in adj[x] if x < y)


def _adj_from_edges(nodes, edges):
    adj = {n: [] for n in nodes}
    for x, y in edges:
        adj[x].append(y)
        adj[y].append(x)
    return adj


def balancing_tree_doc(bt: BalancingTree):
    return {"format_version": FORMAT_VERSION, "kind": "balancing_tree",
            "nodes": sorted(bt.tree_adj),
            "edges": _edges_doc(bt.tree_adj),
            "placement": sorted([v, node] for v, node in bt.placement.items())}


def balancing_tree_from_doc(doc) -> BalancingTree:
    _expect(doc, "balancing_tree")
    adj = _adj_from_edges(doc["nodes"], doc["edges"])
    return BalancingTree(tree_adj=adj,
                         placement={v: node for v, node in doc["placement"]})


def tree_mapping_doc(m: TreeMapping):
    return {"format_version": FORMAT_VERSION, "kind": "tree_mapping",
            "nodes": sorted(m.tree_adj),
            "edges": _edges_doc(m.tree_adj),
            "parts": sorted([node, part] for node, part in m.part_at.items()),
            "is_path": m.is_path}


def tree_mapping_from_doc(doc) -> TreeMapping:
    _expect(doc, "tree_mapping")
    adj = _adj_from_edges(doc["nodes"], doc["edges"])
    return TreeMapping(tree_adj=adj,
                       part_at={node: part for node, part in doc["parts"]},
                       is_path=doc["is_path"])


def tree_layout_doc(layout: TreeLayout):
    return {"format_version": FORMAT_VERSION, "kind": "tree_layout",
            "nodes": sorted(layout.tree_adj),
            "edges": _edges_doc(layout.tree_adj),
            "leaves": sorted([leaf, v] for leaf, v in layout.leaf_vertex.items()),
            "linear": layout.linear}


def tree_layout_from_doc(doc) -> TreeLayout:
    _expect(doc, "tree_layout")
    adj = _adj_from_edges(doc["nodes"], doc["edges"])
    layout = TreeLayout(tree_adj=adj,
                        leaf_vertex={leaf: v for leaf, v in doc["leaves"]},
                        linear=doc["linear"])
    if layout.linear:
        layout.leaf_order = _linear_leaf_order(layout)
    return layout


def _linear_leaf_order(layout: TreeLayout):
    """Recover the leaf order of a canonical caterpillar document."""
    n = len(layout.leaf_vertex)
    if n == 1:
        return list(layout.leaf_vertex.values())
    return [layout.leaf_vertex[leaf] for leaf in sorted(layout.leaf_vertex)]


def hybrid_tree_doc(ht: HybridTree):
    return {"format_version": FORMAT_VERSION, "kind": "hybrid_tree",
            "nodes": sorted(ht.tree_adj),
            "edges": _edges_doc(ht.tree_adj),
            "placement": sorted([v, node] for v, node in ht.node_of.items())}


def hybrid_tree_from_doc(doc) -> HybridTree:
    _expect(doc, "hybrid_tree")
    adj = _adj_from_edges(doc["nodes"], doc["edges"])
    return HybridTree(tree_adj=adj,
                      node_of={v: node for v, node in doc["placement"]})

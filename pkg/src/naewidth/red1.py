"""Step 1: from a strict NAE formula to an edge-weighted graph whose
balancing orders encode satisfying assignments.

Building blocks: weighted caterpillar *bottlenecks* that pin their terminals
to one side of any near-balancing order, *bottleneck sequences* that force
three terminal sets into a fixed relative order, and a weight-padding stage
that raises all but two vertex weights above the threshold gap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .formula import NaeFormula, eval_nae, validate_formula
from .wgraph import WeightedGraph, check_balancing_order


@dataclass(frozen=True)
class Constants:
    """The (tau, gamma, lam, a, b) weight profile driving every gadget."""

    tau: int
    gamma: int
    lam: int
    a: int
    b: int


# Full-scale profile: tau = 24a, lam = 4a, gamma = 3a with a = 45, and
# b = 6*tau*(tau+gamma) + 1.  The small profile keeps a | tau, gamma, lam with
# room for desk-scale tests; its b defaults to 3 and is test-configurable.
PAPER = Constants(tau=1080, gamma=135, lam=180, a=45, b=6 * 1080 * (1080 + 135) + 1)
SMALL = Constants(tau=36, gamma=3, lam=6, a=3, b=3)

PROFILES = {"paper": PAPER, "small": SMALL}


def validate_constants(c: Constants) -> None:
    """Check the four weight inequalities, divisibility by a, and b >= 1.

    Raises ValidationError naming the first violated condition.
    """
    if min(c.tau, c.gamma, c.lam, c.a, c.b) < 1:
        raise ValidationError("constants must be positive integers")
    if not c.gamma < c.lam:
        raise ValidationError(f"gamma < lambda violated ({c.gamma} >= {c.lam})")
    if not 3 * c.gamma + 4 < c.tau:
        raise ValidationError(f"3*gamma + 4 < tau violated ({3 * c.gamma + 4} >= {c.tau})")
    if not 2 * c.lam + c.gamma < c.tau:
        raise ValidationError(f"2*lambda + gamma < tau violated ({2 * c.lam + c.gamma} >= {c.tau})")
    if not 6 * c.lam <= c.tau:
        raise ValidationError(f"6*lambda <= tau violated ({6 * c.lam} > {c.tau})")
    for name, value in (("tau", c.tau), ("gamma", c.gamma), ("lambda", c.lam)):
        if value % c.a != 0:
            raise ValidationError(f"{name} = {value} is not a multiple of a = {c.a}")


def s_edge_weight(c: Constants) -> int:
    return (c.tau + c.gamma) // 2 + 1


def alpha_threshold(c: Constants) -> int:
    """Sim-value threshold under which gadget relocation is guaranteed:
    ceil((b-1) / (6*tau)) - 1.  Equals tau + gamma - 1 on the full-scale profile."""
    return -(-(c.b - 1) // (6 * c.tau)) - 1


@dataclass
class BottleneckHandle:
    """Spine ids and attachment data of one embedded bottleneck.

    Spine a_1 b_1 ... a_k b_k carries weights tau on a_i b_i and gamma+1 on
    b_i a_{i+1}; terminal v_i hangs off a_i.  Rooted at b_k.
    """

    spine_a: list
    spine_b: list
    terminals: list
    attach_weights: list
    root: int = field(init=False)

    def __post_init__(self):
        self.root = self.spine_b[-1]

    def spine_ascending(self):
        out = []
        for a, b in zip(self.spine_a, self.spine_b):
            out.extend((a, b))
        return out

    def vertices(self):
        return set(self.spine_a) | set(self.spine_b) | set(self.terminals)


def build_bottleneck(g: WeightedGraph, terminals, c: Constants, name: str = "B",
                     shared_root=None) -> BottleneckHandle:
    """Attach a bottleneck on the given (vertex, attachment weight) terminals.

    Adds 2k spine vertices (2k-1 when shared_root reuses an existing vertex
    as b_k) and 3k-1 edges.  Attachment weights must lie in
    [gamma+1, tau-gamma-1].
    """
    if not terminals:
        raise ValidationError("bottleneck needs at least one terminal")
    lo, hi = c.gamma + 1, c.tau - c.gamma - 1
    for v, w in terminals:
        if not 0 <= v < g.n:
            raise ValidationError(f"terminal {v} not in graph")
        if not lo <= w <= hi:
            raise ValidationError(f"attachment weight {w} outside [{lo}, {hi}]")
    k = len(terminals)
    spine_a = []
    spine_b = []
    for i in range(1, k + 1):
        spine_a.append(g.add_vertex(f"{name}.a{i}", "spine_a"))
        if i == k and shared_root is not None:
            spine_b.append(shared_root)
        else:
            spine_b.append(g.add_vertex(f"{name}.b{i}", "spine_b" if i < k else "root"))
    for i in range(k):
        g.add_edge(spine_a[i], spine_b[i], c.tau)
        if i + 1 < k:
            g.add_edge(spine_b[i], spine_a[i + 1], c.gamma + 1)
    for i, (v, w) in enumerate(terminals):
        g.add_edge(v, spine_a[i], w)
    return BottleneckHandle(
        spine_a=spine_a,
        spine_b=spine_b,
        terminals=[v for v, _ in terminals],
        attach_weights=[w for _, w in terminals],
    )


@dataclass
class SequenceHandles:
    """The four bottlenecks and fresh s-vertices of one bottleneck sequence."""

    s: list  # [s1, s2, s3]
    b1p: BottleneckHandle
    b2p: BottleneckHandle
    b2m: BottleneckHandle
    b3m: BottleneckHandle
    terminal_sets: list  # [S1, S2, S3] as given

    def vertices(self):
        out = set(self.s)
        for h in (self.b1p, self.b2p, self.b2m, self.b3m):
            out |= h.vertices()
        for s in self.terminal_sets:
            out |= set(s)
        return out


def build_bottleneck_sequence(g: WeightedGraph, s1_terms, s2_terms, s3_terms,
                              c: Constants, name: str = "seq") -> SequenceHandles:
    """Bottleneck sequence on three disjoint terminal sets.

    Each terminal list holds (vertex, attachment weight) pairs.  Fresh
    vertices s_i become the first terminals (attachment gamma+1); the roots
    of B_1^+/B_2^- and of B_2^+/B_3^- are identified, and edges s1-s2, s2-s3
    get weight floor((tau+gamma)/2) + 1.
    """
    sets = [set(v for v, _ in terms) for terms in (s1_terms, s2_terms, s3_terms)]
    if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
        raise ValidationError("terminal sets of a bottleneck sequence must be disjoint")
    s = [g.add_vertex(f"{name}.s{i}", "s_terminal") for i in (1, 2, 3)]
    first = c.gamma + 1
    b1p = build_bottleneck(g, [(s[0], first)] + list(s1_terms), c, f"{name}.B1+")
    b2m = build_bottleneck(g, [(s[1], first)] + list(s2_terms), c, f"{name}.B2-",
                           shared_root=b1p.root)
    b2p = build_bottleneck(g, [(s[1], first)] + list(s2_terms), c, f"{name}.B2+")
    b3m = build_bottleneck(g, [(s[2], first)] + list(s3_terms), c, f"{name}.B3-",
                           shared_root=b2p.root)
    sw = s_edge_weight(c)
    g.add_edge(s[0], s[1], sw)
    g.add_edge(s[1], s[2], sw)
    return SequenceHandles(
        s=s, b1p=b1p, b2p=b2p, b2m=b2m, b3m=b3m,
        terminal_sets=[sorted(x) for x in sets],
    )


def direct_order_of_sequence(handles: SequenceHandles):
    """A direct order of the sequence: terminal blocks ascending by id,
    spines of B_1^+/B_2^+ ascending, spines of B_2^-/B_3^- descending."""
    s1, s2, s3 = handles.terminal_sets

    def desc_spine_no_root(h):
        asc = h.spine_ascending()
        return list(reversed(asc[:-1]))

    order = []
    order.extend(sorted(s1 + [handles.s[0]]))
    order.extend(handles.b1p.spine_ascending())  # ends at the shared root
    order.extend(desc_spine_no_root(handles.b2m))
    order.extend(sorted(s2 + [handles.s[1]]))
    order.extend(handles.b2p.spine_ascending())
    order.extend(desc_spine_no_root(handles.b3m))
    order.extend(sorted(s3 + [handles.s[2]]))
    return order


@dataclass
class HBuild:
    """Built H graph plus the named vertex groups the later steps rely on."""

    graph: WeightedGraph
    constants: Constants
    num_vars: int
    num_clauses: int
    vx: list        # variable vertex per variable index (0-based)
    vbar: list
    tvert: list     # t_i
    tbar: list
    fvert: list     # f_i
    fbar: list
    cvert: list     # clause vertices
    seq: SequenceHandles
    hprime_n: int   # vertices 0..hprime_n-1 form H'
    hprime_weights: list
    pad_assign: dict  # deficient H' vertex -> list of its X neighbors
    x_ids: list
    y_ids: list
    bl: BottleneckHandle
    br: BottleneckHandle

    @property
    def roots(self):
        return [self.bl.root, self.br.root]


def build_H(f: NaeFormula, c: Constants) -> HBuild:
    """Build the edge-weighted graph encoding a strict NAE instance.

    Layout: per-variable vertices v_x, v̄_x, t_i, t̄_i, f_i, f̄_i; clause
    vertices; a bottleneck sequence on (T, C, F); then weight padding with
    terminal sets X and Y so that only the two padding roots stay below
    weight tau + gamma + 1.
    """
    validate_constants(c)
    validate_formula(f, strict=True)
    tau, gamma, lam = c.tau, c.gamma, c.lam
    g = WeightedGraph()
    n, m = f.num_vars, len(f.clauses)

    vx = [g.add_vertex(f"v_x{i + 1}", "variable") for i in range(n)]
    vbar = [g.add_vertex(f"vbar_x{i + 1}", "variable_bar") for i in range(n)]
    tvert = [g.add_vertex(f"t{i + 1}", "t") for i in range(n)]
    tbar = [g.add_vertex(f"tbar{i + 1}", "t_bar") for i in range(n)]
    fvert = [g.add_vertex(f"f{i + 1}", "f") for i in range(n)]
    fbar = [g.add_vertex(f"fbar{i + 1}", "f_bar") for i in range(n)]
    cvert = [g.add_vertex(f"c{j + 1}", "clause") for j in range(m)]

    for j, clause in enumerate(f.clauses):
        for v in clause:
            g.add_edge(vx[v - 1], cvert[j], lam)
    for i in range(n):
        g.add_edge(tvert[i], tbar[i], tau - lam)
        g.add_edge(fvert[i], fbar[i], tau - lam)
        g.add_edge(vx[i], tvert[i], lam)
        g.add_edge(vx[i], fvert[i], lam)
        g.add_edge(vbar[i], tvert[i], lam)
        g.add_edge(vbar[i], fvert[i], lam)

    seq = build_bottleneck_sequence(
        g,
        [(v, tau - lam) for v in tvert],
        [(v, tau - 2 * lam) for v in cvert],
        [(v, tau - lam) for v in fvert],
        c,
        name="BTCF",
    )

    hprime_n = g.n
    hprime_weights = [g.vertex_weight(v) for v in range(hprime_n)]
    target = tau + gamma + 1
    missing = [max(0, target - w) for w in hprime_weights]
    p = sum(missing)

    x_ids = list(g.add_vertices((f"x{j}" for j in range(p)), "pad_x"))
    y_ids = list(g.add_vertices((f"y{j}" for j in range(p)), "pad_y"))
    attach = tau - gamma - 1
    bl = build_bottleneck(g, [(v, attach) for v in x_ids], c, "BL")
    br = build_bottleneck(g, [(v, attach) for v in y_ids], c, "BR")
    for xj, yj in zip(x_ids, y_ids):
        g.add_edge(xj, yj, 2 * gamma + 2)

    pad_assign = {}
    ptr = 0
    for v in range(hprime_n):
        if missing[v]:
            mine = x_ids[ptr:ptr + missing[v]]
            ptr += missing[v]
            pad_assign[v] = mine
            for xj in mine:
                g.add_edge(v, xj, 1)

    return HBuild(
        graph=g, constants=c, num_vars=n, num_clauses=m,
        vx=vx, vbar=vbar, tvert=tvert, tbar=tbar, fvert=fvert, fbar=fbar,
        cvert=cvert, seq=seq, hprime_n=hprime_n, hprime_weights=hprime_weights,
        pad_assign=pad_assign, x_ids=x_ids, y_ids=y_ids, bl=bl, br=br,
    )


def _middle_order(build: HBuild, assignment):
    """The order on H minus the padding bottlenecks, from a NAE assignment:
    t̄ block, true-side variable vertices, a direct order of the (T, C, F)
    sequence, false-side variable vertices, f̄ block."""
    true_side = sorted(
        [build.vx[i] for i in range(build.num_vars) if assignment[i]]
        + [build.vbar[i] for i in range(build.num_vars) if not assignment[i]]
    )
    false_side = sorted(
        [build.vx[i] for i in range(build.num_vars) if not assignment[i]]
        + [build.vbar[i] for i in range(build.num_vars) if assignment[i]]
    )
    order = []
    order.extend(build.tbar)
    order.extend(true_side)
    order.extend(direct_order_of_sequence(build.seq))
    order.extend(false_side)
    order.extend(build.fbar)
    return order


def witness_order(f: NaeFormula, build: HBuild, assignment):
    """The explicit tau-balancing order of H from a NAE-satisfying assignment.

    Padding rule per deficient vertex u with middle-order side weights
    (s_L, s_R): if s_R > gamma+1 all of u's X-neighbors go before u, else
    exactly tau - s_L of them go before u and the rest after.
    """
    if not eval_nae(f, assignment):
        raise ValidationError("assignment does not NAE-satisfy the formula")
    c = build.constants
    g = build.graph
    middle = _middle_order(build, assignment)
    pos = {v: i for i, v in enumerate(middle)}
    hprime = set(range(build.hprime_n))

    order = []
    bl_asc = build.bl.spine_ascending()
    order.extend(reversed(bl_asc))  # reverse order on B_L: spine descending

    for u in middle:
        before = after = ()
        xs = build.pad_assign.get(u)
        if xs:
            s_l = s_r = 0
            pu = pos[u]
            for v, w in g.adj[u]:
                if v in hprime:
                    if pos[v] < pu:
                        s_l += w
                    else:
                        s_r += w
            if s_r > c.gamma + 1:
                before = xs
            else:
                cut = c.tau - s_l
                if not 0 <= cut <= len(xs):
                    raise ValidationError(
                        f"padding split {cut} out of range for vertex {u}; "
                        "middle order is not tau-balancing")
                before, after = xs[:cut], xs[cut:]
        order.extend(before)
        order.append(u)
        order.extend(after)

    order.extend(build.y_ids)
    order.extend(build.br.spine_ascending())
    return order


def decode_assignment(f: NaeFormula, build: HBuild, order):
    """Read an assignment off a (tau+gamma)-balancing order: variable x is
    true iff v_x precedes every clause vertex."""
    c = build.constants
    ok, violator = check_balancing_order(build.graph, order, c.tau + c.gamma)
    if not ok:
        raise ValidationError(
            f"order is not ({c.tau + c.gamma})-balancing: vertex {violator} violates")
    pos = {v: i for i, v in enumerate(order)}
    c_positions = [pos[v] for v in build.cvert]
    c_min, c_max = min(c_positions), max(c_positions)
    values = []
    for i in range(build.num_vars):
        pv = pos[build.vx[i]]
        if pv < c_min:
            values.append(True)
        elif pv > c_max:
            values.append(False)
        else:
            raise ValidationError(
                f"variable vertex {build.vx[i]} is surrounded by clause vertices; "
                "balancing checker and order disagree, refusing to guess")
    return tuple(values)

"""The gadget-expanded circulation network of a DFS tree and its witness flows.

Node ids are strings: ``"v"`` for a vertex of the input graph and ``"v.j"``
for the in-vertex inserted on the tree edge from ``v`` to its ``j``-th child
(children numbered from 0 in DFS order).  The root is an in-vertex; every
other original vertex is an out-vertex.

``B(v)`` below always means the back-arcs entering in-vertex ``v``; the
tree-arc ``(u, "u.j")`` that enters a gadget node has no edge of the input
graph behind it and is not part of ``B``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import BoundViolation, NoCoveringBackArc, NotTwoVertexConnected
from .graph_core import DfsTree, Graph, edge_key
from .rational import ceil_div, fmt

ZERO = Fraction(0)
ONE = Fraction(1)

TREE = "tree"    # in-vertex -> out-vertex, the arc t_v, backed by a graph edge
ENTRY = "entry"  # out-vertex -> gadget in-vertex, no graph edge
BACK = "back"    # out-vertex -> in-vertex, backed by a graph edge


@dataclass(frozen=True)
class Arc:
    tail: str
    head: str
    kind: str
    edge: tuple[int, int] | None  # graph edge this arc stands for

    @property
    def demand(self) -> int:
        return 0 if self.kind == BACK else 1


@dataclass
class CirculationNetwork:
    graph: Graph
    tree: DfsTree
    arcs: list[Arc]
    in_vertices: list[str]
    out_vertices: list[str]
    t_of: dict[str, int]              # in-vertex -> index of its outgoing arc
    back_in: dict[str, list[int]]     # in-vertex -> indices of entering back-arcs
    owner: dict[str, int]             # in-vertex -> graph vertex it belongs to
    gadget: dict[tuple[int, int], str]  # (v, child w) -> in-vertex on that tree edge
    arc_of_edge: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def root(self) -> int:
        return self.tree.root

    def in_vertices_of(self, v: int) -> list[str]:
        """The set I_v: the root itself, or the gadget nodes of a non-root vertex."""
        if v == self.root:
            return [str(v)]
        return [self.gadget[(v, w)] for w in self.tree.children[v]]

    def back_arcs(self) -> list[int]:
        return [i for i, a in enumerate(self.arcs) if a.kind == BACK]

    def cycle(self, i: int) -> list[int]:
        """Arcs of the unique cycle closed by back-arc i (the back-arc last)."""
        a = self.arcs[i]
        if a.kind != BACK:
            raise ValueError("cycle() takes a back-arc")
        d, anc = int(a.tail), self.owner[a.head]
        path = self.tree.path_to_root(d)
        path = path[: path.index(anc) + 1][::-1]  # anc ... d
        out = []
        for u, w in zip(path, path[1:]):
            # the cycle enters anc's gadget node directly through the back-arc
            if u != anc and u != self.root:
                out.append(self._entry[(u, w)])
            out.append(self.t_of[self.gadget[(u, w)]])
        out.append(i)
        return out

    @property
    def _entry(self) -> dict:
        cache = self.__dict__.get("_entry_cache")
        if cache is None:
            cache = {}
            for i, a in enumerate(self.arcs):
                if a.kind == ENTRY:
                    v = int(a.tail)
                    cache[(v, self.tree.children[v][int(a.head.split(".")[1])])] = i
            self.__dict__["_entry_cache"] = cache
        return cache


@dataclass(frozen=True)
class Circulation:
    net: CirculationNetwork = field(repr=False, compare=False)
    flow: tuple  # Fraction per arc, aligned with net.arcs

    def inflow(self, v: str) -> Fraction:
        return sum((self.flow[i] for i in self.net.back_in[v]), ZERO)

    @property
    def cost(self) -> Fraction:
        """Sum over in-vertices of max(f(B(v)) - 1, 0)."""
        return sum((max(self.inflow(v) - 1, ZERO) for v in self.net.in_vertices), ZERO)

    @property
    def back_total(self) -> Fraction:
        """Sum over in-vertices of f(B(v)); the |f''| bookkeeping."""
        return sum((self.inflow(v) for v in self.net.in_vertices), ZERO)

    def __add__(self, other: "Circulation") -> "Circulation":
        return Circulation(self.net, tuple(a + b for a, b in zip(self.flow, other.flow)))

    def conservation_errors(self) -> list[str]:
        bal: dict[str, Fraction] = {}
        for a, f in zip(self.net.arcs, self.flow):
            bal[a.tail] = bal.get(a.tail, ZERO) - f
            bal[a.head] = bal.get(a.head, ZERO) + f
        return [f"{v}: imbalance {b}" for v, b in sorted(bal.items()) if b]

    def deficient_arcs(self) -> list[int]:
        return [i for i, (a, f) in enumerate(zip(self.net.arcs, self.flow)) if f < a.demand]

    def is_feasible(self) -> bool:
        return (not self.conservation_errors() and not self.deficient_arcs()
                and all(f >= 0 for f in self.flow))

    def to_json(self) -> str:
        arcs = [{"from": a.tail, "to": a.head, "flow": fmt(f)}
                for a, f in zip(self.net.arcs, self.flow)]
        return json.dumps({"arcs": arcs, "cost": fmt(self.cost)})


def build_network(g: Graph, t: DfsTree) -> CirculationNetwork:
    if not g.is_two_vertex_connected():
        raise NotTwoVertexConnected("circulation network needs a 2-vertex-connected graph")
    tree_keys = {edge_key(p, c) for p, c in t.tree_edges}
    if len(t.preorder) != g.n or not tree_keys <= g.edges or len(tree_keys) != g.n - 1:
        raise ValueError("t is not a spanning tree of g")
    back_keys = {edge_key(*b) for b in t.back_edges}
    if back_keys | tree_keys != set(g.edges):
        raise ValueError("tree/back edges do not cover g")
    root = t.root
    arcs: list[Arc] = []
    t_of, back_in, owner, gadget = {}, {}, {}, {}
    in_vertices = [str(root)]
    out_vertices = []
    owner[str(root)] = root
    back_in[str(root)] = []
    for v in t.preorder:
        if v == root:
            kids = t.children[v]
            if len(kids) != 1:
                raise NotTwoVertexConnected(f"root {v} has {len(kids)} DFS children")
            t_of[str(v)] = len(arcs)
            arcs.append(Arc(str(v), str(kids[0]), TREE, edge_key(v, kids[0])))
            gadget[(v, kids[0])] = str(v)
            continue
        out_vertices.append(str(v))
        for j, w in enumerate(t.children[v]):
            node = f"{v}.{j}"
            in_vertices.append(node)
            owner[node] = v
            back_in[node] = []
            gadget[(v, w)] = node
            arcs.append(Arc(str(v), node, ENTRY, None))
            t_of[node] = len(arcs)
            arcs.append(Arc(node, str(w), TREE, edge_key(v, w)))
    for d, anc in t.back_edges:
        head = str(root) if anc == root else gadget[(anc, t.child_toward(anc, d))]
        back_in[head].append(len(arcs))
        arcs.append(Arc(str(d), head, BACK, edge_key(d, anc)))
    arc_of_edge = {a.edge: i for i, a in enumerate(arcs) if a.edge is not None}
    return CirculationNetwork(g, t, arcs, in_vertices, out_vertices, t_of, back_in,
                              owner, gadget, arc_of_edge)


def _x_of(x) -> Mapping:
    return x.values if hasattr(x, "values") and not isinstance(x, dict) else x


def build_fprime(net: CirculationNetwork, x) -> Circulation:
    """Route min(x_a, 1) around the fundamental cycle of every back-arc a."""
    xv = _x_of(x)
    flow = [ZERO] * len(net.arcs)
    for i in net.back_arcs():
        amount = min(Fraction(xv[net.arcs[i].edge]), ONE)
        if amount:
            for j in net.cycle(i):
                flow[j] += amount
    return Circulation(net, tuple(flow))


def build_fsecond(net: CirculationNetwork, fprime: Circulation) -> Circulation:
    """Top up deficient entry arcs so that f' + f'' meets every demand.

    Entry arcs are visited in DFS preorder of the child they lead to.  The
    covering back-arc is the one with the deepest head among those leaving
    the child's subtree for a strict ancestor of the parent (ties: smallest
    tail).  Each push is exactly the remaining deficiency.
    """
    t = net.tree
    extra = [ZERO] * len(net.arcs)
    pos = {v: i for i, v in enumerate(t.preorder)}
    entries = sorted(net._entry.items(), key=lambda kv: pos[kv[0][1]])
    backs = [(i, net.arcs[i]) for i in net.back_arcs()]
    for (v, w), ei in entries:
        deficit = ONE - fprime.flow[ei] - extra[ei]
        if deficit <= 0:
            continue
        best = None
        for i, a in backs:
            d, anc = int(a.tail), net.owner[a.head]
            if not t.is_ancestor(w, d) or anc == v or not t.is_ancestor(anc, v):
                continue
            key = (-t.depth[anc], d)
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            raise NoCoveringBackArc(f"no back-arc covers the tree edge {v}-{w}")
        for j in net.cycle(best[1]):
            extra[j] += deficit
    return Circulation(net, tuple(extra))


# --------------------------------------------------------------------------
# audit


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: Fraction
    rhs: Fraction
    scope: str = ""

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs

    def as_dict(self) -> dict:
        return {"name": self.name, "scope": self.scope, "lhs": fmt(self.lhs),
                "rhs": fmt(self.rhs), "pass": self.ok}


@dataclass(frozen=True)
class InVertexAudit:
    node: str
    x_tv: Fraction
    fprime_in: Fraction
    l: Fraction
    u: Fraction
    n_back: int


@dataclass(frozen=True)
class GadgetAudit:
    node: str
    z: Fraction
    eps: Fraction
    cls: str  # heavy | light | trivial


@dataclass(frozen=True)
class VertexAudit:
    in_vertices: dict[str, InVertexAudit]
    x_star_deg: dict[int, Fraction]
    members: dict[int, list[str]]        # I_v per graph vertex
    gadgets: dict[str, GadgetAudit]      # non-root in-vertices

    @property
    def u_star(self) -> Fraction:
        return sum((a.u for a in self.in_vertices.values()), ZERO)

    def configuration_items(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(x, l, u) items of the induced configuration.

        Where x_tv exceeds 1 the item is clipped to x = 1 and mass moved from
        u to l until the configuration conditions hold; value and edge count
        are unchanged and u only shrinks.
        """
        items = []
        for a in self.in_vertices.values():
            x = min(a.x_tv, ONE)
            l, u = a.l, a.u
            if u > 0 and l != 2 - x:
                total = l + u
                l = min(2 - x, total)
                u = total - l
            items.append((x, l, u))
        return items


@dataclass(frozen=True)
class BoundReport:
    checks: list[BoundCheck]
    n: int
    opt_lp: Fraction
    fprime_cost: Fraction
    fsecond_total: Fraction
    f_cost: Fraction
    u_star: Fraction
    cstar_cost: Fraction | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.ok]


def vertex_audit(net: CirculationNetwork, x, fprime: Circulation) -> VertexAudit:
    xv = _x_of(x)
    t = net.tree
    ins = {}
    for v in net.in_vertices:
        x_tv = Fraction(xv[net.arcs[net.t_of[v]].edge])
        fin = fprime.inflow(v)
        l = min(2 - x_tv, fin)
        ins[v] = InVertexAudit(v, x_tv, fin, l, fin - l, len(net.back_in[v]))
    g = net.graph
    deg = {v: ZERO for v in range(g.n)}
    for (a, b), val in xv.items():
        if (a, b) in g.edges:
            deg[a] += val
            deg[b] += val
    members = {v: net.in_vertices_of(v) for v in range(g.n)}
    gadgets = {}
    for (v, w), node in net.gadget.items():
        if v == t.root:
            continue
        a = ins[node]
        z = a.x_tv + sum((Fraction(xv[net.arcs[i].edge]) for i in net.back_in[node]), ZERO)
        sub = set(t.subtree(w))
        eps = ZERO
        for e, val in xv.items():
            p, q = e
            if e not in g.edges:
                continue
            for inside, other in ((p, q), (q, p)):
                if inside in sub and other not in sub and other != v and t.is_ancestor(other, v):
                    eps += val
        if eps >= 1:
            cls = "trivial"
        elif z > 2:
            cls = "heavy"
        else:
            cls = "light"
        gadgets[node] = GadgetAudit(node, z, eps, cls)
    return VertexAudit(ins, deg, members, gadgets)


def audit(net: CirculationNetwork, x, fprime: Circulation, fsecond: Circulation,
          cstar: Circulation | None = None, strict: bool = True):
    """Evaluate every proved inequality for one pipeline run, exactly.

    Returns ``(VertexAudit, BoundReport)``.  With ``strict`` the first failed
    inequality raises BoundViolation.
    """
    xv = _x_of(x)
    g = net.graph
    n = g.n
    opt = sum((Fraction(xv[e]) for e in g.edges), ZERO)
    va = vertex_audit(net, xv, fprime)
    f = fprime + fsecond
    fp, fs, fc = fprime.cost, fsecond.back_total, f.cost
    u_star = va.u_star
    checks = []

    budget = 0
    for v, a in va.in_vertices.items():
        need = ceil_div(a.fprime_in / min(a.x_tv, ONE))
        checks.append(BoundCheck("arc_count", Fraction(need), Fraction(a.n_back), v))
        budget += ceil_div((a.l + a.u) / min(ONE, a.x_tv))
    checks.append(BoundCheck("edge_budget", Fraction(budget), Fraction(n)))
    checks.append(BoundCheck("excess_mass", u_star, 2 * (opt - n)))

    items = va.configuration_items()
    conf_u = sum((u for _, _, u in items), ZERO)
    val = ZERO
    for node, (xi, li, ui) in zip(va.in_vertices, items):
        ei = ceil_div((li + ui) / xi)
        vi = max(ZERO, li + ui - 1)
        val += vi
        checks.append(BoundCheck("item_value", vi, ui + (ei - ui) / 6, node))
    checks.append(BoundCheck("configuration_value", val, conf_u + (n - conf_u) / 6))
    fp_formula = sum((max(ZERO, a.l + a.u - 1) for a in va.in_vertices.values()), ZERO)
    checks.append(BoundCheck("fprime_value_identity", fp, fp_formula))

    checks.append(BoundCheck("fprime_cost", fp, Fraction(5, 3) * opt - Fraction(3, 2) * n))
    checks.append(BoundCheck("fsecond_total", fs, Fraction(5, 6) * (2 * opt - 2 * n - u_star)))
    for v in range(n):
        if v == net.root:
            continue
        lhs = ZERO
        for node in va.members[v]:
            lhs += max(ZERO, 1 - va.gadgets[node].eps)
        rhs = Fraction(5, 6) * (va.x_star_deg[v] - 2
                                - sum((va.in_vertices[w].u for w in va.members[v]), ZERO))
        checks.append(BoundCheck("local_fsecond", lhs, rhs, str(v)))
    checks.append(BoundCheck("f_cost", fc, Fraction(5, 3) * opt - Fraction(3, 2) * n))
    checks.append(BoundCheck("f_split", fc, fp + fs))
    cc = None
    if cstar is not None:
        cc = cstar.cost
        checks.append(BoundCheck("cstar_vs_f", cc, fc))
    report = BoundReport(checks, n, opt, fp, fs, fc, u_star, cc)
    if strict:
        for c in report.checks:
            if not c.ok:
                raise BoundViolation(c.name, c.lhs, c.rhs, c.scope)
    return va, report


def cycle_usage(net: CirculationNetwork, xv: Mapping) -> dict[int, Fraction]:
    """Per entry arc, the total min(x_a, 1) of back-arcs whose cycle uses it.

    Computed from the back-edge list and tree ancestry only, without the
    network's cycle routine.
    """
    t = net.tree
    out = {}
    for (v, w), i in net._entry.items():
        total = ZERO
        for d, anc in t.back_edges:
            if t.is_ancestor(w, d) and anc != v and t.is_ancestor(anc, v):
                total += min(Fraction(xv[edge_key(d, anc)]), ONE)
        out[i] = total
    return out


def check_demands(c: Circulation) -> Sequence[str]:
    return [f"arc {c.net.arcs[i].tail}->{c.net.arcs[i].head} carries {c.flow[i]}"
            for i in c.deficient_arcs()]

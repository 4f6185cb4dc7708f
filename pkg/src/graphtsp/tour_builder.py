"""Tours and s-t paths from circulations, plus the two classical baselines.

A circulation C* in the gadget network gives a removable pairing on
``T + {back-edges carrying flow}``: every such back-edge may be dropped,
and for each non-root in-vertex v with inflow the tree edge t_v may be
dropped as long as one chosen back-edge entering v stays.  The multigraph
is then the cheapest parity-corrected member of that family (keep, double
or drop each edge), found exactly as a small integer program with lazy
connectivity cuts.  The edge-count bound of the circulation is enforced on
the result, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from .circulation_net import Circulation, TREE
from .errors import BoundViolation, Disconnected, NotEulerian, TooLarge
from .graph_core import (DfsTree, Graph, Multigraph, all_pairs_distances, bfs_tree,
                         distances, edge_key, euler_walk, shortest_path)

MATCHING_CAP = 20


@dataclass
class Family:
    """Candidate edges for a parity search.

    ``lower[e]`` is 1 for edges that must stay and 0 for droppable ones;
    ``pairs`` lists droppable edges of which at least one must stay.
    """

    cost: dict = field(default_factory=dict)
    lower: dict = field(default_factory=dict)
    pairs: list = field(default_factory=list)

    def add(self, e, lower: int, cost: int = 1):
        if e in self.lower:
            self.lower[e] = max(self.lower[e], lower)
        else:
            self.lower[e] = lower
            self.cost[e] = cost

    def merge(self, other: "Family") -> "Family":
        out = Family(dict(self.cost), dict(self.lower), list(self.pairs))
        for e in other.lower:
            out.add(e, other.lower[e], other.cost[e])
        out.pairs += other.pairs
        return out


def removable_family(cstar: Circulation, vmap: Sequence[int] | None = None) -> Family:
    """Edges and removable pairs induced by an integral circulation.

    ``vmap`` relabels the network's vertices (local -> global).
    """
    net = cstar.net
    relabel = (lambda e: edge_key(vmap[e[0]], vmap[e[1]])) if vmap else (lambda e: e)
    fam = Family()
    droppable_tree = {}
    for v in net.in_vertices:
        if v == str(net.root):
            continue
        carrying = [i for i in net.back_in[v] if cstar.flow[i] > 0]
        if carrying:
            droppable_tree[net.arcs[net.t_of[v]].edge] = net.arcs[carrying[0]].edge
    for a, f in zip(net.arcs, cstar.flow):
        if a.kind == TREE:
            fam.add(relabel(a.edge), 0 if a.edge in droppable_tree else 1)
        elif a.edge is not None and f > 0:
            fam.add(relabel(a.edge), 0)
    for te, be in droppable_tree.items():
        fam.pairs.append((relabel(te), relabel(be)))
    return fam


def doubled_edge_family(u: int, v: int) -> Family:
    fam = Family()
    fam.add(edge_key(u, v), 1)
    return fam


def parity_search(n: int, fam: Family, odd: Sequence[int] = ()) -> dict:
    """Cheapest multiplicities in {0,1,2} over the family.

    Degrees must be odd exactly on ``odd``, the support must be connected
    and spanning, lower bounds and pairs must hold.
    """
    edges = sorted(fam.lower)
    ne = len(edges)
    optional = [i for i, e in enumerate(edges) if fam.lower[e] == 0]
    zpos = {i: ne + k for k, i in enumerate(optional)}
    nz = len(optional)
    nv = ne + nz + n
    kpos = ne + nz
    target = [1 if v in set(odd) else 0 for v in range(n)]
    rows, lo, hi = [], [], []

    def row(entries, a, b):
        r = np.zeros(nv)
        for j, c in entries:
            r[j] += c
        rows.append(r)
        lo.append(a)
        hi.append(b)

    inc = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        inc[v].append(i)
    for v in range(n):
        row([(i, 1) for i in inc[v]] + [(kpos + v, -2)], target[v], target[v])
    for i in optional:
        row([(i, 1), (zpos[i], -1)], 0, np.inf)
        row([(i, 1), (zpos[i], -2)], -np.inf, 0)
    index = {e: i for i, e in enumerate(edges)}
    for a, b in fam.pairs:
        row([(zpos[index[a]], 1), (zpos[index[b]], 1)], 1, np.inf)

    def add_cut(S):
        crossing = [i for i, (u, v) in enumerate(edges) if (u in S) != (v in S)]
        if any(fam.lower[edges[i]] for i in crossing):
            return False
        if not crossing:
            raise Disconnected(f"no candidate edge leaves {sorted(S)}")
        row([(zpos[i], 1) for i in crossing], 1, np.inf)
        return True

    if n > 1:
        for v in range(n):
            add_cut({v})
    c = np.zeros(nv)
    for i, e in enumerate(edges):
        c[i] = fam.cost[e]
    integrality = np.ones(nv)
    lb = np.zeros(nv)
    ub = np.full(nv, np.inf)
    for i, e in enumerate(edges):
        lb[i] = fam.lower[e]
        ub[i] = 2
    for i in optional:
        ub[zpos[i]] = 1
    for _ in range(10 * n + 10):
        cons = LinearConstraint(np.array(rows), np.array(lo), np.array(hi)) if rows else ()
        res = milp(c, integrality=integrality, bounds=Bounds(lb, ub), constraints=cons,
                   options={"presolve": True})
        if not res.success:
            raise NotEulerian(f"parity search failed: {res.message}")
        mult = {e: int(round(res.x[i])) for i, e in enumerate(edges)}
        mg = Multigraph(n, mult)
        comps = _components(mg)
        if len(comps) <= 1:
            return mg.mult
        progressed = False
        for comp in comps:
            progressed |= add_cut(set(comp))
        if not progressed:
            raise NotEulerian("connectivity cuts made no progress")
    raise NotEulerian("parity search did not converge")


def _components(mg: Multigraph) -> list[list[int]]:
    adj = [[] for _ in range(mg.n)]
    for u, v in mg.mult:
        adj[u].append(v)
        adj[v].append(u)
    seen, comps = [False] * mg.n, []
    for s in range(mg.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def tour_bound(n: int, cstar_cost) -> Fraction:
    return Fraction(4, 3) * n + Fraction(2, 3) * Fraction(cstar_cost) - Fraction(2, 3)


def tour_from_circulation(g: Graph, t: DfsTree, cstar: Circulation) -> Multigraph:
    if cstar.net.graph != g or cstar.net.tree != t:
        raise ValueError("circulation does not live on C(g, t)")
    if not cstar.is_feasible() or any(f.denominator != 1 for f in cstar.flow):
        raise ValueError("circulation must be integral and feasible")
    mult = parity_search(g.n, removable_family(cstar))
    h = Multigraph(g.n, mult)
    bound = tour_bound(g.n, cstar.cost)
    if h.edge_count > bound:
        raise BoundViolation("tour_edges", h.edge_count, bound)
    _validate(h, g, 0, 0)
    return h


def path_from_families(g: Graph, s: int, t: int, fam: Family, bound: Fraction) -> Multigraph:
    """s-t path multigraph of g from a family living on g + {s, t}.

    The edge {s, t} is optional with cost dist(s, t); every copy used is
    replaced by a shortest s-t path of g afterwards.
    """
    d = distances(g, s)[t]
    sp = shortest_path(g, s, t)
    e_new = edge_key(s, t)
    fam = fam.merge(Family())
    fam.lower[e_new] = 0
    fam.cost[e_new] = d
    for u, v in zip(sp, sp[1:]):
        fam.add(edge_key(u, v), 0)
    mult = parity_search(g.n, fam, odd=(s, t))
    copies = mult.pop(e_new, 0)
    acc = dict(mult)
    for u, v in zip(sp, sp[1:]):
        k = edge_key(u, v)
        acc[k] = acc.get(k, 0) + copies
    h = Multigraph(g.n, acc).reduced()
    if h.edge_count > bound:
        raise BoundViolation("path_edges", h.edge_count, bound)
    _validate(h, g, s, t)
    return h


def path_from_circulation(g: Graph, s: int, t: int, tree: DfsTree, cstar: Circulation) -> Multigraph:
    """Single-block case: C* lives on (a support subgraph of) g + {s, t}."""
    gp = g.with_edge(s, t)
    if not gp.is_two_vertex_connected():
        from .errors import NotTwoVertexConnected
        raise NotTwoVertexConnected("g + {s,t} is not 2-vertex-connected")
    if cstar.net.tree != tree or not cstar.net.graph.edges <= gp.edges:
        raise ValueError("circulation does not live on C(g', tree)")
    d = distances(g, s)[t]
    bound = tour_bound(g.n, cstar.cost) + d
    return path_from_families(g, s, t, removable_family(cstar), bound)


def _validate(h: Multigraph, g: Graph, s: int, t: int) -> None:
    if not set(h.mult) <= g.edges:
        raise ValueError("multigraph uses edges outside the graph")
    if any(k > 2 for k in h.mult.values()):
        raise ValueError("multiplicity above 2")
    problem = h.eulerian_problem(s, t)
    if problem is not None:
        raise NotEulerian(problem)


# --------------------------------------------------------------------------
# baselines


def min_weight_perfect_matching(nodes: Sequence[int], dist) -> list[tuple[int, int]]:
    """Exact matching by bitmask DP (the lowest unmatched node is always paired next)."""
    k = len(nodes)
    if k % 2:
        raise ValueError("odd number of nodes")
    if k > MATCHING_CAP:
        raise TooLarge(f"{k} odd vertices exceed the matching cap {MATCHING_CAP}")
    full = (1 << k) - 1
    w = [[dist[nodes[i]][nodes[j]] for j in range(k)] for i in range(k)]

    @lru_cache(maxsize=None)
    def best(mask: int):
        if mask == full:
            return 0, ()
        i = 0
        while mask >> i & 1:
            i += 1
        top = None
        for j in range(i + 1, k):
            if mask >> j & 1:
                continue
            cost, rest = best(mask | 1 << i | 1 << j)
            cost += w[i][j]
            if top is None or cost < top[0]:
                top = (cost, ((i, j),) + rest)
        return top

    _, pairs = best(0)
    best.cache_clear()
    return [(nodes[i], nodes[j]) for i, j in pairs]


def christofides(g: Graph, opt_lp: Fraction | None = None) -> Multigraph:
    """BFS spanning tree plus a minimum matching of its odd vertices.

    Matching pairs are expanded into shortest paths of g; pairs of parallel
    copies beyond two are then cancelled.
    """
    if not g.is_connected():
        raise Disconnected("christofides() needs a connected graph")
    parent = bfs_tree(g, 0)
    tree = Multigraph(g.n, {edge_key(c, p): 1 for c, p in parent.items()})
    odd = tree.odd_vertices()
    dist = {v: distances(g, v) for v in odd}
    acc = dict(tree.mult)
    for a, b in min_weight_perfect_matching(odd, dist):
        p = shortest_path(g, a, b)
        for u, v in zip(p, p[1:]):
            k = edge_key(u, v)
            acc[k] = acc.get(k, 0) + 1
    h = Multigraph(g.n, acc).reduced()
    if g.n > 1:
        _validate(h, g, 0, 0)
    if opt_lp is not None and h.edge_count > g.n + Fraction(opt_lp) / 2:
        raise BoundViolation("christofides_edges", h.edge_count, g.n + Fraction(opt_lp) / 2)
    return h


def doubled_tree_path(g: Graph, s: int, t: int) -> Multigraph:
    """BFS tree from s with every edge off the s-t tree path doubled."""
    parent = bfs_tree(g, s)
    on_path = set()
    v = t
    while v != s:
        on_path.add(edge_key(v, parent[v]))
        v = parent[v]
    h = Multigraph(g.n, {edge_key(c, p): (1 if edge_key(c, p) in on_path else 2)
                         for c, p in parent.items()})
    d = len(on_path)
    if h.edge_count > 2 * (g.n - 1) - d:
        raise BoundViolation("doubled_tree_edges", h.edge_count, 2 * (g.n - 1) - d)
    _validate(h, g, s, t)
    return h


def glue_blocks(g: Graph, per_block_tours: Sequence[tuple[Multigraph, Sequence[int]]]) -> Multigraph:
    """Union of block tours mapped back to g; circuits splice at cut vertices."""
    acc: dict = {}
    for h, vmap in per_block_tours:
        for (u, v), k in h.mult.items():
            key = edge_key(vmap[u], vmap[v])
            acc[key] = acc.get(key, 0) + k
    out = Multigraph(g.n, acc)
    if g.n > 1 and not out.is_spanning_connected():
        raise Disconnected("block tours do not glue into a connected spanning multigraph")
    if out.odd_vertices():
        raise NotEulerian(f"glued multigraph has odd vertices {out.odd_vertices()}")
    return out


# --------------------------------------------------------------------------
# candidate bundle


@dataclass(frozen=True)
class Candidate:
    name: str
    multigraph: Multigraph
    bound: Fraction
    bound_name: str

    @property
    def edges(self) -> int:
        return self.multigraph.edge_count


@dataclass(frozen=True)
class ToursBundle:
    kind: str  # "tour" | "path"
    n: int
    candidates: Mapping[str, Candidate]
    chosen: str
    opt_lp: Fraction
    s: int = 0
    t: int = 0
    dist_st: int = 0
    trace: tuple = ()

    @property
    def chosen_edges(self) -> int:
        return self.candidates[self.chosen].edges

    def walk(self, name: str | None = None) -> list[int]:
        h = self.candidates[name or self.chosen].multigraph
        return euler_walk(h, self.s, self.t)


def choose(candidates: Mapping[str, Candidate]) -> str:
    """Smallest edge count; ties keep the first candidate."""
    return min(candidates, key=lambda k: (candidates[k].edges, list(candidates).index(k)))


def solve_tsp(g: Graph, root: int = 0) -> ToursBundle:
    from .pipeline import tsp_bundle
    return tsp_bundle(g, root=root)


def solve_tspp(g: Graph, s: int, t: int) -> ToursBundle:
    from .pipeline import tspp_bundle
    return tspp_bundle(g, s, t)


def all_pairs(g: Graph):
    return all_pairs_distances(g)

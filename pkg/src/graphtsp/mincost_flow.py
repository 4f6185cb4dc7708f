"""Integral minimum-cost circulation on the gadget network.

The per-in-vertex cost ``max(f(B(v)) - 1, 0)`` is turned into ordinary arc
costs by routing the back-arcs entering ``v`` through a new node ``v'`` that
reaches ``v`` by a free unit-capacity arc and a unit-cost uncapacitated arc.
Lower bounds are removed by the usual excess/deficit shift and the
remaining transshipment problem is solved by successive shortest paths with
node potentials.  All data are integers.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .circulation_net import BACK, Circulation, CirculationNetwork
from .errors import Infeasible, ParseError


@dataclass(frozen=True)
class StdArc:
    tail: str
    head: str
    low: int
    cap: int
    cost: int
    origin: object  # arc index of the source network, or ("free"|"paid", in-vertex)


@dataclass
class StdFlowNetwork:
    net: CirculationNetwork
    nodes: list[str]
    arcs: list[StdArc]
    inf: int

    def to_dimacs(self) -> str:
        idx = {v: i + 1 for i, v in enumerate(self.nodes)}
        lines = [f"c node {idx[v]} {v}" for v in self.nodes]
        lines.append(f"p mcf {len(self.nodes)} {len(self.arcs)}")
        for a in self.arcs:
            lines.append(f"a {idx[a.tail]} {idx[a.head]} {a.low} {a.cap} {a.cost}")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str):
    """Read back ``(node names, [(u, v, low, cap, cost)])`` with 0-based node ids."""
    names, arcs, header = {}, [], None
    for raw in text.splitlines():
        parts = raw.split()
        if not parts:
            continue
        if parts[0] == "c" and len(parts) == 4 and parts[1] == "node":
            names[int(parts[2]) - 1] = parts[3]
        elif parts[0] == "p":
            if len(parts) != 4 or parts[1] != "mcf":
                raise ParseError(f"bad problem line {raw!r}")
            header = (int(parts[2]), int(parts[3]))
        elif parts[0] == "a":
            u, v, lo, cap, cost = (int(p) for p in parts[1:6])
            arcs.append((u - 1, v - 1, lo, cap, cost))
    if header is None or header[1] != len(arcs):
        raise ParseError("missing or inconsistent problem line")
    return [names.get(i, str(i + 1)) for i in range(header[0])], arcs


def _prime(v: str) -> str:
    return v + "'"


def to_standard(net: CirculationNetwork) -> StdFlowNetwork:
    demand = sum(a.demand for a in net.arcs)
    n_back = sum(1 for a in net.arcs if a.kind == BACK)
    inf = demand + n_back * net.graph.n + 1
    nodes = [str(v) for v in net.tree.preorder]
    nodes += [v for v in net.in_vertices if v not in nodes]
    nodes += [_prime(v) for v in net.in_vertices]
    arcs = []
    for i, a in enumerate(net.arcs):
        head = _prime(a.head) if a.kind == BACK else a.head
        arcs.append(StdArc(a.tail, head, a.demand, inf, 0, i))
    for v in net.in_vertices:
        arcs.append(StdArc(_prime(v), v, 0, 1, 0, ("free", v)))
        arcs.append(StdArc(_prime(v), v, 0, inf, 1, ("paid", v)))
    return StdFlowNetwork(net, nodes, arcs, inf)


class _Residual:
    def __init__(self, n: int):
        self.n = n
        self.head, self.cap, self.cost = [], [], []
        self.out = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        k = len(self.head)
        self.head += [v, u]
        self.cap += [cap, 0]
        self.cost += [cost, -cost]
        self.out[u].append(k)
        self.out[v].append(k + 1)
        return k


def _ssp(res: _Residual, s: int, t: int, need: int) -> int:
    pot = [0] * res.n
    sent = 0
    while sent < need:
        dist = [None] * res.n
        prev = [-1] * res.n
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d != dist[u]:
                continue
            for k in res.out[u]:
                if res.cap[k] <= 0:
                    continue
                v = res.head[k]
                nd = d + res.cost[k] + pot[u] - pot[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    prev[v] = k
                    heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            return sent
        for v in range(res.n):
            if dist[v] is not None:
                pot[v] += dist[v]
        push, v = need - sent, t
        while v != s:
            k = prev[v]
            push = min(push, res.cap[k])
            v = res.head[k ^ 1]
        v = t
        while v != s:
            k = prev[v]
            res.cap[k] -= push
            res.cap[k ^ 1] += push
            v = res.head[k ^ 1]
        sent += push
    return sent


def solve_standard(std: StdFlowNetwork) -> list[int]:
    """Optimal integer flow per standard arc."""
    idx = {v: i for i, v in enumerate(std.nodes)}
    n = len(std.nodes)
    S, T = n, n + 1
    res = _Residual(n + 2)
    excess = [0] * n
    handles = []
    for a in std.arcs:
        u, v = idx[a.tail], idx[a.head]
        handles.append(res.add(u, v, a.cap - a.low, a.cost))
        excess[u] -= a.low
        excess[v] += a.low
    need = 0
    for v, b in enumerate(excess):
        if b > 0:
            res.add(S, v, b, 0)
            need += b
        elif b < 0:
            res.add(v, T, -b, 0)
    if _ssp(res, S, T, need) != need:
        raise Infeasible("no circulation meets the demands")
    return [a.low + res.cap[k ^ 1] for a, k in zip(std.arcs, handles)]


def has_negative_cycle(std: StdFlowNetwork, flows: list[int]) -> bool:
    """Bellman-Ford over the residual network of a circulation."""
    idx = {v: i for i, v in enumerate(std.nodes)}
    edges = []
    for a, f in zip(std.arcs, flows):
        u, v = idx[a.tail], idx[a.head]
        if f < a.cap:
            edges.append((u, v, a.cost))
        if f > a.low:
            edges.append((v, u, -a.cost))
    dist = [0] * len(std.nodes)
    for _ in range(len(std.nodes)):
        changed = False
        for u, v, c in edges:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            return False
    return True


def standard_cost(std: StdFlowNetwork, flows: list[int]) -> int:
    return sum(a.cost * f for a, f in zip(std.arcs, flows))


def min_cost_circulation(std: StdFlowNetwork) -> Circulation:
    return to_circulation(std, solve_standard(std))


def to_circulation(std: StdFlowNetwork, flows: list[int]) -> Circulation:
    """Project a standard-network flow back onto the gadget arcs."""
    out = [Fraction(0)] * len(std.net.arcs)
    for a, f in zip(std.arcs, flows):
        if isinstance(a.origin, int):
            out[a.origin] = Fraction(f)
    return Circulation(std.net, tuple(out))


def lift(std: StdFlowNetwork, c: Circulation) -> list[Fraction]:
    """Standard-network flow of a circulation: inflow up to 1 on the free arc, the rest paid."""
    out = []
    for a in std.arcs:
        if isinstance(a.origin, int):
            out.append(c.flow[a.origin])
        else:
            kind, v = a.origin
            inflow = c.inflow(v)
            out.append(min(inflow, 1) if kind == "free" else max(inflow - 1, Fraction(0)))
    return out

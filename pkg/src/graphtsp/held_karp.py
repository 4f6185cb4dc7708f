"""Exact Held-Karp relaxations by cutting planes.

The LP over the current cut pool is solved through its dual

    max  b.y   s.t.  A^T y <= 1,  y >= 0

with a fraction-free (Bareiss) integer tableau and Bland's rule.  The slack
basis is dual feasible from the start and a new cut is just a new column,
so every separation round warm-starts from the previous basis.  The primal
optimum is read off the simplex multipliers, which makes it a basic
solution of the pool polytope; once separation finds nothing it is a vertex
of the full relaxation as well.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import Disconnected, SupportTooLarge
from .graph_core import Graph, edge_key
from .rational import fmt, parse

TOUR = "tour"
PATH = "path"


@dataclass(frozen=True)
class LpSolution:
    n: int
    values: Mapping[tuple[int, int], Fraction]
    objective: Fraction
    kind: str = TOUR
    s: int | None = None
    t: int | None = None
    is_extreme: bool = False
    # cut (as frozenset of vertices) -> dual value, for basic cut columns
    dual: Mapping[frozenset, Fraction] = field(default_factory=dict)
    rounds: int = 0

    @property
    def support(self) -> frozenset:
        return frozenset(e for e, x in self.values.items() if x > 0)

    def rhs(self, S) -> int:
        return cut_rhs(self.kind, S, self.s, self.t)

    def to_json(self) -> str:
        kind = self.kind if self.kind == TOUR else f"path({self.s},{self.t})"
        doc = {
            "objective": fmt(self.objective),
            "values": {f"{u}-{v}": fmt(x) for (u, v), x in sorted(self.values.items())},
            "kind": kind,
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str, n: int) -> "LpSolution":
        doc = json.loads(text)
        values = {}
        for k, x in doc["values"].items():
            u, v = (int(p) for p in k.split("-"))
            values[edge_key(u, v)] = parse(x)
        kind, s, t = doc["kind"], None, None
        if kind.startswith("path("):
            s, t = (int(p) for p in kind[5:-1].split(","))
            kind = PATH
        return cls(n, values, parse(doc["objective"]), kind, s, t)


def cut_rhs(kind: str, S, s=None, t=None) -> int:
    if kind == TOUR:
        return 2
    return 1 if (s in S) != (t in S) else 2


def cut_value(x: Mapping, S) -> Fraction:
    S = set(S)
    return sum((xe for (u, v), xe in x.items() if (u in S) != (v in S)), Fraction(0))


# --------------------------------------------------------------------------
# min cuts on integer weights


def stoer_wagner_phases(n: int, weights: Mapping[tuple[int, int], int]):
    """All cut-of-the-phase pairs (value, side) of Stoer-Wagner.

    The global minimum cut is the smallest of them.  Sides are frozensets of
    original vertices.
    """
    W = [[0] * n for _ in range(n)]
    for (u, v), w in weights.items():
        W[u][v] += w
        W[v][u] += w
    groups = {v: [v] for v in range(n)}
    active = list(range(n))
    phases = []
    while len(active) > 1:
        start = active[0]
        conn = {v: W[start][v] for v in active if v != start}
        prev, last = start, start
        while conn:
            best = max(conn, key=lambda u: (conn[u], -u))
            val = conn.pop(best)
            prev, last = last, best
            for u in conn:
                conn[u] += W[best][u]
        phases.append((val, frozenset(groups[last])))
        # merge last into prev
        for u in active:
            W[prev][u] += W[last][u]
            W[u][prev] = W[prev][u]
        W[prev][prev] = 0
        groups[prev].extend(groups.pop(last))
        active.remove(last)
    return phases


def min_st_cut(n: int, weights: Mapping[tuple[int, int], int], s: int, t: int):
    """Minimum s-t cut by Edmonds-Karp; returns (value, source side)."""
    cap = [dict() for _ in range(n)]
    for (u, v), w in weights.items():
        if w:
            cap[u][v] = cap[u].get(v, 0) + w
            cap[v][u] = cap[v].get(u, 0) + w
    flow = 0
    while True:
        parent = {s: None}
        queue = [s]
        for u in queue:
            if t in parent:
                break
            for v in sorted(cap[u]):
                if cap[u][v] > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return flow, frozenset(parent)
        path, v = [], t
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        aug = min(cap[u][v] for u, v in path)
        for u, v in path:
            cap[u][v] -= aug
            cap[v][u] = cap[v].get(u, 0) + aug
        flow += aug


def _canonical(S: frozenset, n: int) -> frozenset:
    comp = frozenset(range(n)) - S
    return min(S, comp, key=lambda side: sorted(side))


def _violated(n, weights, scale, kind, s=None, t=None):
    """Violated cuts for integer weights equal to ``scale`` times x.

    Returns sorted ``(violation value, canonical side)`` pairs, most violated
    first; value is the cut weight divided by its right-hand side so that
    1- and 2-cuts compare on the same footing.
    """
    found = {}

    def offer(value, S, rhs):
        if not S or len(S) == n:
            return
        if value < rhs * scale:
            S = _canonical(S, n)
            key = Fraction(value, rhs)
            if S not in found or key < found[S]:
                found[S] = key

    if kind == TOUR:
        for value, S in stoer_wagner_phases(n, weights):
            offer(value, S, 2)
    else:
        value, S = min_st_cut(n, weights, s, t)
        offer(value, S, 1)
        if n > 2:
            # merge t into s; every cut of the merged graph keeps s, t together
            relabel = {}
            k = 0
            for v in range(n):
                if v == t:
                    continue
                relabel[v] = k
                k += 1
            relabel[t] = relabel[s]
            merged = {}
            for (u, v), w in weights.items():
                a, b = relabel[u], relabel[v]
                if a != b:
                    key = edge_key(a, b)
                    merged[key] = merged.get(key, 0) + w
            back = {}
            for v, a in relabel.items():
                back.setdefault(a, []).append(v)
            for value, side in stoer_wagner_phases(n - 1, merged):
                S = frozenset(v for a in side for v in back[a])
                offer(value, S, 2)
    return sorted(((v, S) for S, v in found.items()), key=lambda p: (p[0], sorted(p[1])))


def separate(g: Graph, x: Mapping, kind: str = TOUR, s: int | None = None, t: int | None = None):
    """A most violated cut for x, or None.

    Ties between equally violated cuts go to the lexicographically smallest
    vertex set (each cut is represented by its smaller side in that order).
    """
    vals = {e: Fraction(x.get(e, 0)) for e in g.edges}
    if any(v < 0 for v in vals.values()):
        raise ValueError("x must be non-negative")
    den = 1
    for v in vals.values():
        den = den * v.denominator // _gcd(den, v.denominator)
    weights = {e: int(v * den) for e, v in vals.items()}
    cuts = _violated(g.n, weights, den, kind, s, t)
    return set(cuts[0][1]) if cuts else None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# --------------------------------------------------------------------------
# cut-pool LP


class _DualTableau:
    """Fraction-free tableau for  max b.y  s.t.  A^T y + s = 1,  y, s >= 0.

    Rows are edges.  Column j < m is the slack of edge j; later columns are
    cuts in insertion order, which is also Bland's variable order.  All
    stored entries are integers equal to ``D`` times the true tableau value.
    """

    def __init__(self, m: int):
        self.m = m
        self.D = 1
        self.rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        self.rhs = [1] * m
        self.z = [0] * m
        self.zrhs = 0
        self.basis = list(range(m))
        self.cols = []  # (row indicator tuple, cost) per cut column

    def add_column(self, a: list[int], cost: int) -> None:
        m, D = self.m, self.D
        idx = [e for e in range(m) if a[e]]
        for i in range(m):
            row = self.rows[i]
            row.append(sum(row[e] for e in idx))
        self.z.append(sum(self.z[e] for e in idx) - D * cost)
        self.cols.append((tuple(a), cost))

    def pivot(self, r: int, s: int) -> None:
        p, D = self.rows[r][s], self.D
        prow, prhs = self.rows[r], self.rhs[r]
        for i in range(self.m):
            if i == r:
                continue
            row = self.rows[i]
            f = row[s]
            if f:
                self.rows[i] = [(p * a - f * b) // D for a, b in zip(row, prow)]
                self.rhs[i] = (p * self.rhs[i] - f * prhs) // D
            else:
                self.rows[i] = [p * a // D for a in row]
                self.rhs[i] = p * self.rhs[i] // D
        f = self.z[s]
        self.z = [(p * a - f * b) // D for a, b in zip(self.z, prow)]
        self.zrhs = (p * self.zrhs - f * prhs) // D
        self.D = p
        self.basis[r] = s

    def optimize(self) -> int:
        pivots = 0
        while True:
            s = next((j for j, zj in enumerate(self.z) if zj < 0), None)
            if s is None:
                return pivots
            best = None
            for i in range(self.m):
                a = self.rows[i][s]
                if a <= 0:
                    continue
                if best is None:
                    best = i
                    continue
                lhs = self.rhs[i] * self.rows[best][s]
                rhs = self.rhs[best] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            if best is None:
                raise Disconnected("dual LP unbounded: the cut LP is infeasible")
            self.pivot(best, s)
            pivots += 1


def _bareiss_rank(mat: list[list[int]]) -> int:
    a = [row[:] for row in mat]
    rows, cols = len(a), len(a[0]) if a else 0
    rank, prev = 0, 1
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for r in range(rank + 1, rows):
            f = a[r][c]
            a[r] = [(p * x - f * y) // prev for x, y in zip(a[r], a[rank])]
        prev = p
        rank += 1
    return rank


def _solve(g: Graph, kind: str, s=None, t=None) -> LpSolution:
    if not g.is_connected():
        raise Disconnected("Held-Karp LP is infeasible on a disconnected graph")
    edges = list(g.sorted_edges)
    index = {e: i for i, e in enumerate(edges)}
    m, n = len(edges), g.n
    tab = _DualTableau(m)
    pool = []
    seen = set()

    def add_cut(S):
        S = _canonical(frozenset(S), n)
        if S in seen:
            return False
        seen.add(S)
        a = [0] * m
        for e, (u, v) in enumerate(edges):
            if (u in S) != (v in S):
                a[e] = 1
        tab.add_column(a, cut_rhs(kind, S, s, t))
        pool.append(S)
        return True

    for v in range(n):
        add_cut({v})
    rounds = 0
    while True:
        tab.optimize()
        rounds += 1
        weights = {edges[e]: tab.z[e] for e in range(m)}
        cuts = _violated(n, weights, tab.D, kind, s, t)
        added = [add_cut(S) for _, S in cuts]
        if not any(added):
            if cuts:
                raise RuntimeError("separation returned only pooled cuts")
            break
    D = tab.D
    values = {edges[e]: Fraction(tab.z[e], D) for e in range(m)}
    objective = Fraction(tab.zrhs, D)
    dual = {}
    for i, j in enumerate(tab.basis):
        if j >= m and tab.rhs[i]:
            dual[pool[j - m]] = Fraction(tab.rhs[i], D)
    # the returned point is a vertex iff its tight constraints for the basic
    # columns have full rank
    tight = []
    for j in tab.basis:
        if j < m:
            tight.append([1 if e == j else 0 for e in range(m)])
        else:
            tight.append(list(tab.cols[j - m][0]))
    extreme = m == 0 or _bareiss_rank(tight) == m
    return LpSolution(n, values, objective, kind, s, t, extreme, dual, rounds)


def solve_hk_tour(g: Graph) -> LpSolution:
    if g.n < 2:
        raise ValueError("tour relaxation needs at least two vertices")
    sol = _solve(g, TOUR)
    _check_support(sol)
    return sol


def solve_hk_path(g: Graph, s: int, t: int) -> LpSolution:
    if s == t:
        raise ValueError("path relaxation needs s != t")
    if g.n == 2:
        if not g.has_edge(s, t):
            raise Disconnected("two isolated vertices")
        return LpSolution(2, {edge_key(s, t): Fraction(1)}, Fraction(1), PATH, s, t, True,
                          {frozenset({0}): Fraction(1)}, 0)
    return _solve(g, PATH, s, t)


def _check_support(sol: LpSolution) -> None:
    if sol.is_extreme and len(sol.support) > 2 * sol.n - 1:
        raise SupportTooLarge(f"extreme solution with support {len(sol.support)} > 2n-1")


def restrict_to_support(g: Graph, sol: LpSolution) -> Graph:
    sup = sol.support
    if len(sup) > 2 * g.n - 1:
        raise SupportTooLarge(f"support of size {len(sup)} exceeds 2n-1 = {2 * g.n - 1}")
    return g.subgraph(sup)


def check_optimality(g: Graph, sol: LpSolution) -> list[str]:
    """Independent certificate check; returns a list of problems (empty if fine).

    Verifies objective bookkeeping, that separation finds no violated cut,
    and that the stored dual is feasible with the same objective value.
    """
    problems = []
    if sum(sol.values.values(), Fraction(0)) != sol.objective:
        problems.append("objective differs from the sum of values")
    if any(x < 0 for x in sol.values.values()):
        problems.append("negative value")
    if separate(g, sol.values, sol.kind, sol.s, sol.t) is not None:
        problems.append("violated cut remains")
    load = {e: Fraction(0) for e in g.edges}
    for S, y in sol.dual.items():
        if y < 0:
            problems.append("negative dual")
        for e in g.edges:
            u, v = e
            if (u in S) != (v in S):
                load[e] += y
    if any(val > 1 for val in load.values()):
        problems.append("dual infeasible")
    dual_obj = sum((y * sol.rhs(S) for S, y in sol.dual.items()), Fraction(0))
    if dual_obj != sol.objective:
        problems.append(f"dual objective {dual_obj} != {sol.objective}")
    return problems

"""Exact reference solvers, independent of the approximation pipeline."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from .errors import Disconnected, TooLarge
from .graph_core import Graph, all_pairs_distances
from .held_karp import TOUR, LpSolution, cut_rhs, cut_value
from .tour_builder import Family, parity_search

DP_CAP = 16
FULL_FAMILY_CAP = 8
BIG = np.iinfo(np.int32).max // 4


def _closure(g: Graph) -> np.ndarray:
    if not g.is_connected():
        raise Disconnected("oracle needs a connected graph")
    return np.array(all_pairs_distances(g), dtype=np.int64)


def _held_karp_dp(d: np.ndarray, start: int) -> np.ndarray:
    """dp[mask, v]: shortest walk from start through the vertices of mask, ending at v."""
    n = len(d)
    size = 1 << n
    dp = np.full((size, n), BIG, dtype=np.int64)
    dp[1 << start, start] = 0
    pop = np.array([bin(m).count("1") for m in range(size)])
    has_start = (np.arange(size) >> start) & 1 == 1
    for k in range(1, n):
        masks = np.nonzero((pop == k) & has_start)[0]
        cur = dp[masks]
        for w in range(n):
            free = (masks >> w) & 1 == 0
            if not free.any():
                continue
            vals = (cur[free] + d[:, w]).min(axis=1)
            np.minimum.at(dp[:, w], masks[free] | (1 << w), vals)
    return dp


def exact_tsp(g: Graph) -> int:
    """Shortest closed walk visiting every vertex."""
    if g.n > DP_CAP:
        raise TooLarge(f"exact_tsp is capped at n <= {DP_CAP}")
    if g.n == 1:
        return 0
    d = _closure(g)
    dp = _held_karp_dp(d, 0)
    return int((dp[-1] + d[:, 0]).min())


def exact_tspp(g: Graph, s: int, t: int) -> int:
    """Shortest s-t walk visiting every vertex."""
    if g.n > DP_CAP:
        raise TooLarge(f"exact_tspp is capped at n <= {DP_CAP}")
    if g.n == 1:
        return 0
    d = _closure(g)
    return int(_held_karp_dp(d, s)[-1, t])


def exact_tsp_milp(g: Graph, s: int | None = None, t: int | None = None) -> int:
    """Same optimum through an integer program over multiplicities in {0,1,2}.

    A connected spanning multigraph with even degrees (odd exactly at s, t)
    is a closed walk (s-t walk), and some optimal walk never uses an edge
    more than twice.
    """
    if not g.is_connected():
        raise Disconnected("oracle needs a connected graph")
    if g.n == 1:
        return 0
    fam = Family()
    for e in g.sorted_edges:
        fam.add(e, 0)
    odd = () if s is None or s == t else (s, t)
    return sum(parity_search(g.n, fam, odd).values())


def _all_cuts(n: int, kind: str, s, t):
    for k in range(1, n):
        for S in combinations(range(n), k):
            if 0 in S:
                yield frozenset(S), cut_rhs(kind, frozenset(S), s, t)


def lp_full_family(g: Graph, kind: str = TOUR, s=None, t=None) -> float:
    """The cut LP with every cut written out, solved in floating point by HiGHS."""
    if g.n > FULL_FAMILY_CAP:
        raise TooLarge(f"full cut family is capped at n <= {FULL_FAMILY_CAP}")
    edges = g.sorted_edges
    rows, rhs = [], []
    for S, r in _all_cuts(g.n, kind, s, t):
        rows.append([-1.0 if (u in S) != (v in S) else 0.0 for u, v in edges])
        rhs.append(-float(r))
    res = linprog(np.ones(len(edges)), A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=(0, None), method="highs")
    if not res.success:
        raise ValueError(res.message)
    return float(res.fun)


def certify_full_family(g: Graph, sol: LpSolution) -> list[str]:
    """Exact check of a solution against every cut.

    Primal feasibility over all 2^n - 2 cuts, and the stored dual is
    feasible for the full-family dual with the same objective.
    """
    problems = []
    for S, r in _all_cuts(g.n, sol.kind, sol.s, sol.t):
        if cut_value(sol.values, S) < r:
            problems.append(f"cut {sorted(S)} below {r}")
    load = {e: Fraction(0) for e in g.edges}
    dual_obj = Fraction(0)
    for S, y in sol.dual.items():
        if y < 0:
            problems.append(f"negative dual on {sorted(S)}")
        dual_obj += y * cut_rhs(sol.kind, S, sol.s, sol.t)
        for u, v in g.edges:
            if (u in S) != (v in S):
                load[(u, v)] += y
    if any(v > 1 for v in load.values()):
        problems.append("dual violates an edge constraint")
    if dual_obj != sol.objective:
        problems.append(f"dual objective {dual_obj} != {sol.objective}")
    if sum(sol.values.values(), Fraction(0)) != sol.objective:
        problems.append("objective is not the sum of x")
    return problems

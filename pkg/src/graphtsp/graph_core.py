"""Undirected graphs, multigraphs, DFS trees and Euler walks.

Vertices are always ``0..n-1`` and an undirected edge is the sorted pair
``(u, v)`` with ``u < v``.  Every object here is treated as immutable once
built.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import Disconnected, NotEulerian, ParseError


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise ValueError(f"bad edge {e} for n={self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        keys = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            k = edge_key(u, v)
            if k in keys:
                raise ValueError(f"parallel edge {k}")
            keys.add(k)
        return cls(n, frozenset(keys))

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return tuple(tuple(sorted(a)) for a in nb)

    @cached_property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(_bfs_order(self.adj, 0)) == self.n

    def is_two_vertex_connected(self) -> bool:
        if self.n < 3 or not self.is_connected():
            return False
        return len(articulation_points(self)) == 0

    def with_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges | {edge_key(u, v)})

    def subgraph(self, edges: Iterable[tuple[int, int]]) -> "Graph":
        es = frozenset(edge_key(u, v) for u, v in edges)
        if not es <= self.edges:
            raise ValueError("edges are not a subset of the graph")
        return Graph(self.n, es)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.sorted_edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        else:
            raise ParseError("graph text must be newline-terminated")
        if not lines:
            raise ParseError("empty graph text")
        n, m = _parse_pair(lines[0], 1)
        if n < 0 or m < 0:
            raise ParseError("negative header value")
        if len(lines) != m + 1:
            raise ParseError(f"header says {m} edges, found {len(lines) - 1}")
        seen = set()
        for i, line in enumerate(lines[1:], start=2):
            u, v = _parse_pair(line, i)
            if not (0 <= u < v < n):
                raise ParseError(f"line {i}: edge {u} {v} out of range or unordered")
            if (u, v) in seen:
                raise ParseError(f"line {i}: duplicate edge {u} {v}")
            seen.add((u, v))
        return cls(n, frozenset(seen))


def _parse_pair(line: str, lineno: int) -> tuple[int, int]:
    parts = line.split(" ")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"line {lineno}: expected two decimal integers, got {line!r}")
    return int(parts[0]), int(parts[1])


def _bfs_order(adj, s: int) -> list[int]:
    seen = [False] * len(adj)
    seen[s] = True
    order = [s]
    q = deque([s])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
                q.append(w)
    return order


@dataclass(frozen=True)
class Multigraph:
    """Edge multiset over vertices ``0..n-1``; zero multiplicities are dropped."""

    n: int
    mult: Mapping[tuple[int, int], int]

    def __post_init__(self):
        clean = {}
        for (u, v), k in self.mult.items():
            if k < 0:
                raise ValueError("negative multiplicity")
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad edge {(u, v)}")
            if k:
                key = edge_key(u, v)
                clean[key] = clean.get(key, 0) + k
        object.__setattr__(self, "mult", dict(sorted(clean.items())))

    @classmethod
    def from_counts(cls, n: int, counts: Iterable[tuple[tuple[int, int], int]]):
        acc: dict = {}
        for (u, v), k in counts:
            key = edge_key(u, v)
            acc[key] = acc.get(key, 0) + k
        return cls(n, acc)

    @property
    def edge_count(self) -> int:
        return sum(self.mult.values())

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for (u, v), k in self.mult.items():
            deg[u] += k
            deg[v] += k
        return tuple(deg)

    def odd_vertices(self) -> list[int]:
        return [v for v, d in enumerate(self.degrees) if d % 2]

    def support(self) -> Graph:
        return Graph(self.n, frozenset(self.mult))

    def is_spanning_connected(self) -> bool:
        """Connected support touching every vertex."""
        if self.n <= 1:
            return True
        sup = self.support()
        return all(d > 0 for d in self.degrees) and sup.is_connected()

    def eulerian_problem(self, s: int, t: int) -> str | None:
        """Why the multigraph has no Euler walk from s to t, or None if it does."""
        odd = set(self.odd_vertices())
        if s == t:
            if odd:
                return f"odd-degree vertices {sorted(odd)}"
        elif odd != {s, t}:
            return f"odd-degree set {sorted(odd)} is not {{{s}, {t}}}"
        if not self.is_spanning_connected():
            return "support is not connected and spanning"
        return None

    def add(self, other: "Multigraph") -> "Multigraph":
        acc = dict(self.mult)
        for k, c in other.mult.items():
            acc[k] = acc.get(k, 0) + c
        return Multigraph(self.n, acc)

    def reduced(self) -> "Multigraph":
        """Drop pairs of parallel copies until every multiplicity is 1 or 2.

        Parity and support connectivity are unchanged.
        """
        return Multigraph(self.n, {k: (c if c <= 2 else 2 - c % 2) for k, c in self.mult.items()})


@dataclass(frozen=True)
class DfsTree:
    root: int
    parent: Mapping[int, int]
    tree_edges: tuple  # (parent, child), in discovery order
    back_edges: tuple  # (descendant, ancestor)
    preorder: tuple

    @cached_property
    def children(self) -> dict[int, list[int]]:
        ch = {v: [] for v in self.preorder}
        for p, c in self.tree_edges:
            ch[p].append(c)
        return ch

    @cached_property
    def _intervals(self):
        tin, tout = {}, {}
        clock = 0
        stack = [(self.root, False)]
        while stack:
            v, done = stack.pop()
            if done:
                tout[v] = clock
                continue
            tin[v] = clock
            clock += 1
            stack.append((v, True))
            for c in reversed(self.children[v]):
                stack.append((c, False))
        return tin, tout

    @cached_property
    def depth(self) -> dict[int, int]:
        d = {self.root: 0}
        for p, c in self.tree_edges:
            d[c] = d[p] + 1
        return d

    def is_ancestor(self, a: int, d: int) -> bool:
        """True iff a is an ancestor of d (a vertex is its own ancestor)."""
        tin, tout = self._intervals
        return tin[a] <= tin[d] and tout[d] <= tout[a]

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def path_to_root(self, v: int) -> list[int]:
        path = [v]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path

    def child_toward(self, a: int, d: int) -> int:
        """The child of a whose subtree contains the strict descendant d."""
        u = d
        while self.parent[u] != a:
            u = self.parent[u]
        return u


def articulation_points(g: Graph) -> set[int]:
    return _block_scan(g)[1]


def _block_scan(g: Graph):
    """Iterative Hopcroft-Tarjan; returns (edge blocks, articulation markers)."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    blocks = []
    cuts = set()
    timer = 0
    for start in range(n):
        if disc[start] != -1:
            continue
        disc[start] = low[start] = timer
        timer += 1
        root_children = 0
        edge_stack = []
        stack = [(start, -1, iter(g.adj[start]))]
        while stack:
            v, p, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] == -1:
                    disc[w] = low[w] = timer
                    timer += 1
                    edge_stack.append(edge_key(v, w))
                    stack.append((w, v, iter(g.adj[w])))
                    if v == start:
                        root_children += 1
                    advanced = True
                    break
                if w != p and disc[w] < disc[v]:
                    edge_stack.append(edge_key(v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if p != -1:
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    if p != start:
                        cuts.add(p)
                    comp = []
                    while True:
                        e = edge_stack.pop()
                        comp.append(e)
                        if e == edge_key(p, v):
                            break
                    blocks.append(comp)
        if root_children > 1:
            cuts.add(start)
    return blocks, cuts


def blocks(g: Graph) -> list[tuple[Graph, tuple[int, ...]]]:
    """Biconnected components of a connected graph.

    Each block is returned relabelled to ``0..k-1`` together with the map
    from local to global vertex ids (increasing).  Blocks are ordered by
    their sorted global vertex lists.
    """
    if not g.is_connected():
        raise Disconnected("blocks() needs a connected graph")
    if g.n == 1:
        return [(Graph(1, frozenset()), (0,))]
    out = []
    for comp in _block_scan(g)[0]:
        verts = sorted({x for e in comp for x in e})
        local = {v: i for i, v in enumerate(verts)}
        es = frozenset(edge_key(local[u], local[v]) for u, v in comp)
        out.append((Graph(len(verts), es), tuple(verts)))
    out.sort(key=lambda b: b[1])
    return out


def dfs_tree_greedy(g: Graph, weights: Mapping, root: int = 0) -> DfsTree:
    """DFS that always descends along the heaviest edge to an unvisited vertex.

    Ties go to the smaller neighbour index.
    """
    if not g.is_connected():
        raise Disconnected("dfs_tree_greedy() needs a connected graph")
    if not 0 <= root < g.n:
        raise ValueError(f"root {root} out of range")
    w = {e: weights[e] for e in g.edges}
    visited = [False] * g.n
    visited[root] = True
    parent = {}
    tree_edges = []
    preorder = [root]
    stack = [root]
    while stack:
        v = stack[-1]
        best = None
        for u in g.adj[v]:
            if visited[u]:
                continue
            wu = w[edge_key(u, v)]
            if best is None or wu > best[0]:
                best = (wu, u)
        if best is None:
            stack.pop()
            continue
        u = best[1]
        visited[u] = True
        parent[u] = v
        tree_edges.append((v, u))
        preorder.append(u)
        stack.append(u)
    pos = {v: i for i, v in enumerate(preorder)}
    tree_keys = {edge_key(p, c) for p, c in tree_edges}
    back = []
    for e in g.sorted_edges:
        if e in tree_keys:
            continue
        a, b = e
        back.append((a, b) if pos[a] > pos[b] else (b, a))
    back.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
    return DfsTree(root, parent, tuple(tree_edges), tuple(back), tuple(preorder))


def distances(g: Graph, s: int) -> list[int]:
    if not g.is_connected():
        raise Disconnected("distances() needs a connected graph")
    dist = [-1] * g.n
    dist[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def bfs_tree(g: Graph, s: int) -> dict[int, int]:
    """Parent map of the BFS tree rooted at s (smallest-index neighbour order)."""
    if not g.is_connected():
        raise Disconnected("bfs_tree() needs a connected graph")
    parent = {}
    seen = [False] * g.n
    seen[s] = True
    q = deque([s])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if not seen[w]:
                seen[w] = True
                parent[w] = u
                q.append(w)
    return parent


def shortest_path(g: Graph, s: int, t: int) -> list[int]:
    parent = bfs_tree(g, s)
    path = [t]
    while path[-1] != s:
        path.append(parent[path[-1]])
    return path[::-1]


def all_pairs_distances(g: Graph) -> list[list[int]]:
    return [distances(g, s) for s in range(g.n)]


def euler_walk(m: Multigraph, s: int, t: int) -> list[int]:
    """Hierholzer walk from s to t using every multi-edge once.

    Among untraversed edges at the current vertex the one towards the
    smallest neighbour is taken, which makes the output deterministic.
    """
    problem = m.eulerian_problem(s, t)
    if problem is not None:
        raise NotEulerian(problem)
    if m.edge_count == 0:
        return [s]
    remaining = dict(m.mult)
    nbrs = [[] for _ in range(m.n)]
    for u, v in remaining:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for lst in nbrs:
        lst.sort()
    ptr = [0] * m.n
    stack = [s]
    walk = []
    while stack:
        v = stack[-1]
        lst = nbrs[v]
        while ptr[v] < len(lst) and remaining[edge_key(v, lst[ptr[v]])] == 0:
            ptr[v] += 1
        if ptr[v] == len(lst):
            walk.append(stack.pop())
            continue
        u = lst[ptr[v]]
        remaining[edge_key(u, v)] -= 1
        stack.append(u)
    walk.reverse()
    # Hierholzer on an s-t trail ends the reversed stack at t.
    assert walk[0] == s and walk[-1] == t, (walk[0], walk[-1])
    return walk

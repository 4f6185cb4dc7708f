"""Deterministic graph families for tests and experiments."""

from __future__ import annotations

import random

from .errors import BadParams
from .graph_core import Graph, edge_key


def cycle(n: int) -> Graph:
    if n < 3:
        raise BadParams("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    if n < 2:
        raise BadParams("complete needs n >= 2")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid(a: int, b: int) -> Graph:
    if a < 1 or b < 1 or a * b < 2:
        raise BadParams("grid needs at least two vertices")
    edges = []
    for r in range(a):
        for c in range(b):
            v = r * b + c
            if c + 1 < b:
                edges.append((v, v + 1))
            if r + 1 < a:
                edges.append((v, v + b))
    return Graph.from_edges(a * b, edges)


def gap(k: int) -> Graph:
    """Two hubs 0 and 1 joined by three internally disjoint paths of k inner vertices."""
    if k < 1:
        raise BadParams("gap needs k >= 1")
    edges = []
    nxt = 2
    for _ in range(3):
        prev = 0
        for _ in range(k):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph.from_edges(3 * k + 2, edges)


def random_2vc(n: int, m: int, seed: int) -> Graph:
    """Random 2-vertex-connected graph with exactly m edges.

    Built as an ear decomposition: a random cycle, open ears of random
    length between distinct existing vertices until all n vertices are used,
    then random chords.  Every step preserves 2-vertex-connectivity.
    """
    if n < 3:
        raise BadParams("random_2vc needs n >= 3")
    if not n <= m <= n * (n - 1) // 2:
        raise BadParams(f"m must lie in [{n}, {n * (n - 1) // 2}]")
    rng = random.Random(seed)
    spare = m - n
    length = n if spare == 0 else rng.randint(3, n)
    rest = n - length
    ears = rng.randint(1, min(rest, spare)) if rest else 0
    cuts = sorted(rng.sample(range(1, rest), ears - 1)) if ears else []
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [rest])] if ears else []
    edges = {edge_key(i, (i + 1) % length) for i in range(length)}
    used = length
    for k in sizes:
        a, b = rng.sample(range(used), 2)
        path = [a] + list(range(used, used + k)) + [b]
        edges |= {edge_key(u, v) for u, v in zip(path, path[1:])}
        used += k
    missing = sorted({(i, j) for i in range(n) for j in range(i + 1, n)} - edges)
    edges |= set(rng.sample(missing, m - len(edges)))
    perm = list(range(n))
    rng.shuffle(perm)
    return Graph.from_edges(n, [edge_key(perm[u], perm[v]) for u, v in edges])


def by_name(name: str, **params) -> Graph:
    families = {"cycle": cycle, "complete": complete, "grid": grid, "gap": gap,
                "random_2vc": random_2vc}
    if name not in families:
        raise BadParams(f"unknown family {name!r}")
    try:
        return families[name](**params)
    except TypeError as exc:
        raise BadParams(str(exc)) from None


def batch(count: int = 100, base_seed: int = 1, large: int | None = None):
    """Seeded random instances: ``count`` with 5 <= n <= 14, then ``large``
    (default count // 4) with 15 <= n <= 25.

    Yields ``(seed, graph, s, t)``; s and t are distinct random endpoints.
    """
    large = count // 4 if large is None else large
    for i in range(count + large):
        seed = base_seed + i
        rng = random.Random(seed)
        n = rng.randint(5, 14) if i < count else rng.randint(15, 25)
        m = rng.randint(n, n + n // 2)
        s, t = rng.sample(range(n), 2)
        yield seed, random_2vc(n, m, seed), s, t

from fractions import Fraction

import pytest
from hypothesis import given

from conftest import connected, two_connected
from graphtsp.errors import Disconnected, NotEulerian, ParseError
from graphtsp.generators import complete, cycle
from graphtsp.graph_core import (Graph, Multigraph, articulation_points, blocks, dfs_tree_greedy,
                                 distances, euler_walk)

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
P3 = Graph.from_edges(3, [(0, 1), (1, 2)])
BOWTIE = Graph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])


def brute_cut_vertices(g):
    out = set()
    for v in range(g.n):
        rest = [(a, b) for a, b in g.edges if v not in (a, b)]
        keep = [u for u in range(g.n) if u != v]
        idx = {u: i for i, u in enumerate(keep)}
        h = Graph.from_edges(len(keep), [(idx[a], idx[b]) for a, b in rest])
        if len(keep) > 1 and not h.is_connected():
            out.add(v)
    return out


def test_text_round_trip():
    g = complete(4)
    assert Graph.from_text(g.to_text()) == g


@pytest.mark.parametrize("text", [
    "3 1\n0 1",            # no trailing newline
    "3 2\n0 1\n",          # fewer edges than the header
    "3 1\n1 0\n",          # unordered
    "3 1\n0 3\n",          # out of range
    "3 2\n0 1\n0 1\n",     # duplicate
    "3 1\n0 0\n",          # loop
    "3 1\n0  1\n",         # bad spacing
])
def test_text_rejects(text):
    with pytest.raises(ParseError):
        Graph.from_text(text)


def test_blocks_small():
    assert [vm for _, vm in blocks(TRIANGLE)] == [(0, 1, 2)]
    assert sorted(vm for _, vm in blocks(P3)) == [(0, 1), (1, 2)]
    bow = blocks(BOWTIE)
    assert sorted(vm for _, vm in bow) == [(0, 1, 2), (2, 3, 4)]
    assert all(b.m == 3 for b, _ in bow)
    assert articulation_points(BOWTIE) == {2} == brute_cut_vertices(BOWTIE)


def test_blocks_disconnected():
    with pytest.raises(Disconnected):
        blocks(Graph.from_edges(4, [(0, 1), (2, 3)]))


@given(connected())
def test_blocks_partition_edges(g):
    parts = blocks(g)
    seen = []
    for b, vmap in parts:
        assert b.n == 2 or b.is_two_vertex_connected()
        seen += [tuple(sorted((vmap[u], vmap[v]))) for u, v in b.edges]
    assert sorted(seen) == sorted(g.edges)
    assert articulation_points(g) == brute_cut_vertices(g)


def test_dfs_cycle():
    t = dfs_tree_greedy(cycle(4), {e: Fraction(1) for e in cycle(4).edges}, 0)
    assert list(t.preorder) == [0, 1, 2, 3]
    assert list(t.back_edges) == [(3, 0)]


def test_dfs_follows_heavy_edges():
    w = {(0, 1): Fraction(1), (0, 2): Fraction(1, 2), (1, 2): Fraction(1)}
    t = dfs_tree_greedy(TRIANGLE, w, 0)
    assert sorted(t.tree_edges) == [(0, 1), (1, 2)]
    assert list(t.back_edges) == [(2, 0)]


def test_dfs_k4_ties():
    g = complete(4)
    t = dfs_tree_greedy(g, {e: Fraction(2, 3) for e in g.edges}, 0)
    assert list(t.preorder) == [0, 1, 2, 3]
    assert sorted(t.back_edges) == [(2, 0), (3, 0), (3, 1)]


@given(two_connected())
def test_dfs_tree_shape(g):
    t = dfs_tree_greedy(g, {e: Fraction(1) for e in g.edges}, 0)
    assert len(t.tree_edges) == g.n - 1
    assert len(t.tree_edges) + len(t.back_edges) == g.m
    for d, a in t.back_edges:
        assert t.is_ancestor(a, d) and a != d


def test_euler_walks():
    c5 = Multigraph(5, {e: 1 for e in cycle(5).edges})
    w = euler_walk(c5, 0, 0)
    assert len(w) == 6 and w[0] == w[-1] == 0
    doubled = Multigraph(3, {(0, 1): 2, (1, 2): 2})
    assert len(euler_walk(doubled, 0, 0)) == 5
    with pytest.raises(NotEulerian):
        euler_walk(Multigraph(3, {(0, 1): 2, (1, 2): 1, (0, 2): 1}), 0, 0)


def test_euler_walk_uses_each_copy_once():
    m = Multigraph(4, {(0, 1): 2, (1, 2): 1, (2, 3): 1, (1, 3): 1, (0, 3): 1})
    w = euler_walk(m, 0, 3)
    used = {}
    for a, b in zip(w, w[1:]):
        k = (min(a, b), max(a, b))
        used[k] = used.get(k, 0) + 1
    assert used == dict(m.mult)


def test_distances():
    assert distances(P3, 0) == [0, 1, 2]
    assert distances(cycle(6), 0) == [0, 1, 2, 3, 2, 1]
    assert distances(complete(4), 2) == [1, 1, 0, 1]


def test_reduced_keeps_parity():
    m = Multigraph(2, {(0, 1): 5})
    assert m.reduced().mult == {(0, 1): 1}
    assert Multigraph(2, {(0, 1): 4}).reduced().mult == {(0, 1): 2}

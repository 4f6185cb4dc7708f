import random
from fractions import Fraction

import pytest
from hypothesis import given

from conftest import two_connected
from graphtsp.circulation_net import Circulation, build_fprime, build_fsecond, build_network
from graphtsp.errors import Infeasible
from graphtsp.generators import complete, cycle
from graphtsp.graph_core import dfs_tree_greedy
from graphtsp.mincost_flow import (StdArc, StdFlowNetwork, has_negative_cycle, lift,
                                   min_cost_circulation, parse_dimacs, solve_standard,
                                   standard_cost, to_circulation, to_standard)


def net_of(g, x=None):
    x = x or {e: Fraction(1) for e in g.edges}
    return build_network(g, dfs_tree_greedy(g, x, 0)), x


def test_standard_shape_cycle():
    net, _ = net_of(cycle(5))
    std = to_standard(net)
    assert len(net.in_vertices) == 4
    assert len(std.arcs) == len(net.arcs) + 2 * len(net.in_vertices)
    assert len(std.nodes) == 4 + 4 + len(net.in_vertices)
    assert std.inf > sum(a.low for a in std.arcs)


def test_paid_arc_charges_excess():
    net, x = net_of(cycle(5))
    fp = build_fprime(net, x)
    scaled = Circulation(net, tuple(f * Fraction(5, 2) for f in fp.flow))
    std = to_standard(net)
    flows = lift(std, scaled)
    free = [f for a, f in zip(std.arcs, flows) if a.origin == ("free", "0")]
    paid = [f for a, f in zip(std.arcs, flows) if a.origin == ("paid", "0")]
    assert free == [1] and paid == [Fraction(3, 2)]
    assert standard_cost(std, flows) == scaled.cost == Fraction(3, 2)


def test_zero_flow_lifts():
    net, _ = net_of(cycle(4))
    std = to_standard(net)
    zero = Circulation(net, tuple(Fraction(0) for _ in net.arcs))
    assert standard_cost(std, lift(std, zero)) == 0


@pytest.mark.parametrize("n", [3, 4, 5, 9])
def test_cycles_cost_nothing(n):
    net, _ = net_of(cycle(n))
    c = min_cost_circulation(to_standard(net))
    assert c.cost == 0 and c.is_feasible()


def test_k4_no_worse_than_witness():
    k4 = complete(4)
    net, x = net_of(k4, {e: Fraction(2, 3) for e in k4.edges})
    fp = build_fprime(net, x)
    f = fp + build_fsecond(net, fp)
    std = to_standard(net)
    c = min_cost_circulation(std)
    assert c.cost <= f.cost
    assert c.cost <= fp.cost + build_fsecond(net, fp).back_total
    # the fractional witness is not optimal, so its residual graph has a negative cycle
    assert f.cost > c.cost and has_negative_cycle(std, lift(std, f))


def test_infeasible_demand():
    net, _ = net_of(cycle(3))
    std = StdFlowNetwork(net, ["a", "b"], [StdArc("a", "b", 1, 5, 0, 0)], 5)
    with pytest.raises(Infeasible):
        solve_standard(std)


def test_dimacs_round_trip():
    net, _ = net_of(complete(5))
    std = to_standard(net)
    names, arcs = parse_dimacs(std.to_dimacs())
    assert names == std.nodes
    idx = {v: i for i, v in enumerate(std.nodes)}
    assert arcs == [(idx[a.tail], idx[a.head], a.low, a.cap, a.cost) for a in std.arcs]


@given(two_connected(hi=14))
def test_optimal_integral_certified(g):
    net, x = net_of(g)
    std = to_standard(net)
    flows = solve_standard(std)
    c = to_circulation(std, flows)
    assert c.is_feasible()
    assert all(f.denominator == 1 and f >= 0 for f in c.flow)
    assert not has_negative_cycle(std, flows)
    assert standard_cost(std, flows) == c.cost
    # lower-bound elimination round trip
    assert to_circulation(std, lift(std, c)).flow == c.flow


@given(two_connected(hi=14))
def test_dominates_perturbed_witnesses(g):
    net, x = net_of(g)
    fp = build_fprime(net, x)
    f = fp + build_fsecond(net, fp)
    best = min_cost_circulation(to_standard(net)).cost
    assert best <= f.cost
    rng = random.Random(g.m)
    for _ in range(5):
        extra = [Fraction(0)] * len(net.arcs)
        for i in net.cycle(rng.choice(net.back_arcs())):
            extra[i] += rng.randint(1, 3)
        bumped = f + Circulation(net, tuple(extra))
        rounded = Circulation(net, tuple(Fraction(-(-v.numerator // v.denominator)) for v in bumped.flow))
        assert best <= bumped.cost
        if rounded.is_feasible():
            assert best <= rounded.cost

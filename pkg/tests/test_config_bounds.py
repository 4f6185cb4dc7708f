from fractions import Fraction as Q

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from graphtsp.config_bounds import (THREE_EDGE, TWO_EDGE, Configuration, brute_force_val,
                                    ceiling, check_theorem_bound, edges_of, frontier_csv,
                                    normalize, normalize_item, tight_example, value)
from graphtsp.errors import BudgetInfeasible, InvalidConfiguration, ParseError


def conf(items, n):
    return Configuration.of(items, n)


def test_item_values():
    assert value(conf([TWO_EDGE], 2)) == Q(1, 3) and edges_of(TWO_EDGE) == 2
    assert value(conf([THREE_EDGE], 3)) == Q(1, 2) and edges_of(THREE_EDGE) == 3
    heavy = (Q(1), Q(1), Q(5, 2))
    assert value(conf([heavy], 4)) == Q(5, 2) and edges_of(heavy) == 4


@pytest.mark.parametrize("item, n", [
    ((Q(3, 2), Q(0), Q(0)), 2),           # x > 1
    ((Q(1, 2), Q(2), Q(0)), 5),           # l above the wall
    ((Q(1, 2), Q(1, 2), Q(1)), 5),        # mass off the wall
    ((Q(2, 3), Q(4, 3), Q(0)), 1),        # over the edge budget
])
def test_invalid(item, n):
    with pytest.raises(InvalidConfiguration) as err:
        value(conf([item], n))
    assert err.value.violations


def test_mass_budget_mismatch():
    with pytest.raises(InvalidConfiguration):
        value(Configuration.of([TWO_EDGE], 2, mass_budget=1))


def test_zero_items_are_ignored():
    assert value(conf([(Q(0), Q(0), Q(0)), TWO_EDGE], 2)) == Q(1, 3)


def test_normalize_examples():
    assert normalize_item((Q(1, 2), Q(1, 2), Q(0))) == (1, 1, 0)
    assert value(conf([(Q(1, 2), Q(1, 2), Q(0))], 1)) == 0 == value(conf([(Q(1), Q(1), Q(0))], 1))
    assert normalize_item(TWO_EDGE) == TWO_EDGE


def test_theorem_bound_examples():
    for item, e in ((TWO_EDGE, 2), (THREE_EDGE, 3)):
        rep = check_theorem_bound(conf([item], e))
        assert rep.items[0].margin == 0
    rep = check_theorem_bound(conf([(Q(1), Q(1), Q(5, 2))], 4))
    assert rep.items[0].margin == Q(1, 4)


def test_relaxed_edge_count_breaks_the_item_bound():
    # with a non-integral edge count the per-item inequality fails
    e = Q(5, 2)
    assert e / 6 - (e - 1) / (e + 1) == Q(-1, 84)


def test_tight_examples():
    c = tight_example(5, 0)
    assert sorted(c.items) == sorted([TWO_EDGE, THREE_EDGE]) and value(c) == Q(5, 6)
    c = tight_example(4, 0)
    assert c.items == (TWO_EDGE, TWO_EDGE) and value(c) == Q(2, 3)
    c = tight_example(6, Q(3, 2))
    assert c.items == ((1, 1, Q(3, 2)), THREE_EDGE) and value(c) == 2
    with pytest.raises(BudgetInfeasible):
        tight_example(3, 5)


def test_brute_force_examples():
    assert brute_force_val(2, 0) >= Q(1, 3)
    assert brute_force_val(3, 0) >= Q(1, 2)


def test_json_round_trip():
    c = tight_example(7, Q(1, 2))
    assert Configuration.from_json(c.to_json()) == c
    with pytest.raises(ParseError):
        Configuration.from_json('{"items": [], "n": 2, "u_star": "0/1", "extra": 1}')


def test_frontier_csv():
    text = frontier_csv(4, [0, Q(1, 2)])
    assert text.splitlines() == ["u_star,val_lower_bound,ceiling", "0/1,2/3,2/3", "1/2,1/1,13/12"]


fractions = st.fractions(min_value=0, max_value=1, max_denominator=12)


@st.composite
def items(draw):
    x = draw(st.fractions(min_value=Q(1, 12), max_value=1, max_denominator=12))
    if draw(st.booleans()):
        return (x, 2 - x, draw(st.fractions(min_value=0, max_value=3, max_denominator=12)))
    return (x, draw(fractions) * (2 - x), Q(0))


@given(st.lists(items(), min_size=1, max_size=5))
def test_theorem_bound_holds(its):
    n = sum(edges_of(it) for it in its)
    c = conf(its, n)
    rep = check_theorem_bound(c)
    assert rep.ok and rep.value <= ceiling(n, c.mass_budget)


@given(st.lists(items(), min_size=1, max_size=5))
def test_normalize_properties(its):
    n = sum(edges_of(it) for it in its)
    c = conf(its, n)
    nc = normalize(c)
    assert value(nc) >= value(c)
    assert [it[2] for it in nc.items] == [it[2] for it in c.items]
    assert nc.edges == c.edges
    assert normalize(nc) == nc
    for x, l, u in nc.items:
        assert l == 0 or l == 2 - x
        assert l == 0 or (l + u) / x == edges_of((x, l, u))


@given(st.integers(2, 12), st.fractions(min_value=0, max_value=6, max_denominator=4))
def test_tight_example_value(n, u):
    assume(u + 1 <= n)
    try:
        c = tight_example(n, u)
    except BudgetInfeasible:
        assert -(-(u + 1).numerator // (u + 1).denominator) > n
        return
    assert value(c) >= ceiling(n, u) - 1
    assert value(c) <= ceiling(n, u)


@given(st.integers(2, 8), st.fractions(min_value=0, max_value=5, max_denominator=2))
def test_brute_force_under_ceiling_and_monotone(n, u):
    coarse = brute_force_val(n, u, Q(1, 6))
    fine = brute_force_val(n, u, Q(1, 12))
    if coarse is not None:
        assert fine is not None and coarse <= fine
    if fine is not None:
        assert fine <= ceiling(n, u)


def test_budget_is_checked_before_the_bound():
    c = conf([TWO_EDGE], 2)
    assert check_theorem_bound(c).ok
    with pytest.raises(InvalidConfiguration):
        check_theorem_bound(Configuration(c.items, 1, c.mass_budget))

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from graphtsp.generators import random_2vc
from graphtsp.graph_core import Graph

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@st.composite
def two_connected(draw, lo=3, hi=12):
    n = draw(st.integers(lo, hi))
    m = draw(st.integers(n, min(n * (n - 1) // 2, 2 * n)))
    seed = draw(st.integers(0, 10_000))
    return random_2vc(n, m, seed)


@st.composite
def connected(draw, lo=2, hi=10):
    """Random connected graph: a random tree plus a few extra edges."""
    n = draw(st.integers(lo, hi))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph.from_edges(n, edges)


@pytest.fixture
def F():
    return Fraction

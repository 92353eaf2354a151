import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from mwis_mp.graph import WeightedGraph


def make(weights, edges=()):
    return WeightedGraph.from_edges(weights, list(edges))


def cycle(n, w=3.0):
    return make([w] * n, [(i, (i + 1) % n) for i in range(n)])


@pytest.fixture
def edge():
    return make([1.0, 2.0], [(0, 1)])


@pytest.fixture
def p3():
    return make([2.0, 3.0, 2.0], [(0, 1), (1, 2)])


@pytest.fixture
def c5():
    return cycle(5)


@pytest.fixture
def triangle():
    return make([1.0, 1.0, 1.0], [(0, 1), (1, 2), (0, 2)])


@st.composite
def graphs(draw, min_n=1, max_n=7, bipartite=False):
    """Small weighted graphs; weights bounded away from zero."""
    n = draw(st.integers(min_n, max_n))
    w = draw(st.lists(st.floats(0.05, 5.0, allow_nan=False), min_size=n, max_size=n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if bipartite:
        side = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        pairs = [(i, j) for i, j in pairs if side[i] != side[j]]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return make(w, [p for p, k in zip(pairs, keep) if k])


def random_graph(rng, n, p=0.4):
    w = 1.0 - rng.random(n)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return make(w, list(zip(iu[keep].tolist(), ju[keep].tolist())))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)

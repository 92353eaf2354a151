import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mwis_mp import comptree, maxprod
from mwis_mp.comptree import Membership, build, expected_size, oracle_estimate, root_membership
from mwis_mp.maxprod import Estimate

from conftest import graphs, make


def exhaustive_root_values(tree):
    """Best independent-set weight of the tree with and without the root."""
    best = [-np.inf, -np.inf]
    for bits in itertools.product((0, 1), repeat=tree.size):
        x = np.array(bits)
        if any(x[v] and x[tree.parent[v]] for v in range(1, tree.size)):
            continue
        val = float(tree.weight @ x)
        best[x[0]] = max(best[x[0]], val)
    return best[1], best[0]


def test_triangle_depth_three(triangle):
    t = build(triangle, 0, 3)
    assert t.size == 5 and t.root == 0
    kids = t.children(0)
    assert sorted(t.node[kids].tolist()) == [1, 2]
    for k in kids:
        (g,) = t.children(k)
        assert t.node[g] == 3 - t.node[k]


def test_single_vertex_and_leaf_exhaustion(p3):
    assert build(p3, 2, 1).size == 1
    a, b = build(p3, 1, 2), build(p3, 1, 3)
    assert a.size == b.size == 3
    assert np.array_equal(a.node, b.node) and np.array_equal(a.parent, b.parent)
    with pytest.raises(ValueError):
        build(p3, 0, 0)


def test_budget():
    with pytest.raises(comptree.TreeTooLarge):
        build(make([1.0] * 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]), 0, 30, budget=1000)


def test_membership_examples(p3, c5):
    assert root_membership(build(make([2.0]), 0, 1)) is Membership.IN_EVERY_MWIS
    t = build(p3, 1, 2)
    assert comptree.root_values(t) == (3.0, 4.0)
    assert root_membership(t) is Membership.IN_NO_MWIS
    eq = make([1.0, 1.0], [(0, 1)])
    assert root_membership(build(eq, 0, 2)) is Membership.AMBIGUOUS
    assert root_membership(build(eq, 1, 2)) is Membership.AMBIGUOUS


def test_oracle_estimate_examples(p3, c5):
    assert all(oracle_estimate(p3, i, 1) is Estimate.ONE for i in range(3))
    assert oracle_estimate(p3, 1, 2) is Estimate.ZERO
    t = build(c5, 0, 2)
    assert t.size == 3 and comptree.root_values(t) == (3.0, 6.0)
    assert oracle_estimate(c5, 3, 2) is Estimate.ZERO


@given(graphs(max_n=6), st.integers(1, 5), st.data())
@settings(max_examples=150, deadline=None)
def test_size_matches_recurrence(g, t, data):
    i = data.draw(st.integers(0, g.n - 1))
    assert build(g, i, t).size == expected_size(g, i, t)


@given(graphs(max_n=6), st.integers(1, 5), st.data())
@settings(max_examples=150, deadline=None)
def test_dp_matches_enumeration(g, t, data):
    i = data.draw(st.integers(0, g.n - 1))
    tree = build(g, i, t)
    if tree.size > 12:
        tree = tree.truncate(max(1, min(t, 2)))
    if tree.size > 12:
        return
    got = comptree.root_values(tree)
    want = exhaustive_root_values(tree)
    assert np.allclose(got, want, atol=1e-12)


@given(graphs(max_n=6), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_truncate_equals_rebuild(g, t):
    full = build(g, 0, 5)
    a, b = full.truncate(t), build(g, 0, t)
    assert np.array_equal(a.node, b.node) and np.array_equal(a.parent, b.parent)


@given(graphs(max_n=7))
@settings(max_examples=80, deadline=None)
def test_maxprod_matches_tree_oracle(g):
    table = comptree.oracle_estimates(g, 6)
    gamma = maxprod.zero_messages(g)
    for t in range(6):
        est = maxprod.estimate(g, gamma)
        assert np.array_equal(est, table[t]), (t, maxprod.as_symbols(est), maxprod.as_symbols(table[t]))
        gamma = maxprod.sweep(g, gamma)

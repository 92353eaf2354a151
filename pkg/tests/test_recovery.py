import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mwis_mp.oracles import brute_force_mwis, check_complementary_slackness
from mwis_mp.recovery import Color, algo_mwis, default_delta1, est_recover

from conftest import graphs, make


def test_est_single_edge(edge):
    r = est_recover(edge, [2.0101], 0.05)
    assert r.colors == [Color.GRAY, Color.ORANGE]
    assert r.x.tolist() == [0, 1]


def test_est_p3(p3):
    r = est_recover(p3, [2.0, 2.0], 0.1)
    assert r.colors == [Color.ORANGE, Color.GRAY, Color.ORANGE]
    assert r.x.tolist() == [1, 0, 1]


def test_est_isolated_node_turns_red():
    r = est_recover(make([5.0]), np.zeros(0), 0.1)
    assert r.colors == [Color.RED] and r.x.tolist() == [1]
    assert r.counts()["red"] == 1


def test_est_gray_spreads_through_orange():
    # node 0 gray, 1 orange through a heavy edge, 2 gray behind the orange
    g = make([1.0, 2.0, 1.0], [(0, 1), (1, 2)])
    r = est_recover(g, [1.5, 0.0], 0.1)
    assert r.colors == [Color.GRAY, Color.ORANGE, Color.GRAY]


def test_est_rejects_bad_input(edge):
    with pytest.raises(ValueError):
        est_recover(edge, [-1.0], 0.1)
    with pytest.raises(ValueError):
        est_recover(edge, [1.0], -0.1)


@given(graphs(max_n=9), st.integers(0, 2**31), st.floats(0, 0.5))
@settings(max_examples=200, deadline=None)
def test_est_total_and_within_n_rounds(g, seed, delta1):
    lam = np.random.default_rng(seed).uniform(0, 3, g.m)
    r = est_recover(g, lam, delta1)
    assert r.rounds <= g.n
    assert set(r.x.tolist()) <= {0, 1} and len(r.colors) == g.n
    assert Color.GREEN not in r.colors


def test_algo_single_edge(edge):
    res = algo_mwis(edge, eps=0.01, delta=1e-10, delta1=0.05)
    assert res.x.tolist() == [0, 1] and res.independent and not res.warnings


def test_algo_five_cycle_flags_nonbipartite(c5):
    res = algo_mwis(c5)
    assert len(res.x) == 5
    assert any("not bipartite" in w for w in res.warnings)


def test_default_delta1():
    assert default_delta1(1e-3) == pytest.approx(2.5e-3)


@given(graphs(max_n=10, bipartite=True))
@settings(max_examples=80, deadline=None)
def test_algo_exact_on_unique_bipartite(g):
    ip = brute_force_mwis(g)
    if not ip.unique or ip.value - second_best(g, ip) < 0.02:
        return
    res = algo_mwis(g)
    assert np.array_equal(res.x, ip.optima[0])


def second_best(g, ip):
    # weight of the best independent set different from the optimum
    best = -np.inf
    n = g.n
    opt = ip.optima[0]
    for mask in range(1 << n):
        x = np.array([(mask >> k) & 1 for k in range(n)])
        if np.array_equal(x, opt):
            continue
        if all(not (x[i] and x[j]) for i, j in g.edges.tolist()):
            best = max(best, float(g.weights @ x))
    return best


@given(graphs(max_n=9))
@settings(max_examples=80, deadline=None)
def test_certificate_implies_optimal(g):
    res = algo_mwis(g, eps=1e-3)
    lam = res.descent.lam
    if check_complementary_slackness(g, res.x, lam, tol=10 * res.delta1).holds:
        ip = brute_force_mwis(g)
        assert float(g.weights @ res.x) >= ip.value - 10 * res.delta1 * max(g.n, 1)

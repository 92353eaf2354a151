import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mwis_mp.generators import random_factor_model
from mwis_mp.graph import is_independent
from mwis_mp.map_reduction import (MapProblem, NotLiftable, ReductionError, brute_force_map,
                                   build_reduction, lift, map_via_mwis, offset_for)
from mwis_mp.oracles import brute_force_mwis


def ising(t1, t2, t12):
    # singleton factors on y1, y2 and a pair factor on (y1, y2)
    return MapProblem.from_tables([2, 2], [([0], [0, t1]), ([1], [0, t2]),
                                           ([0, 1], [0, 0, 0, t12])])


def maximal_independent_sets(g):
    for mask in range(1 << g.n):
        x = np.array([(mask >> k) & 1 for k in range(g.n)])
        if not is_independent(g, x):
            continue
        if all(x[i] or any(x[j] for j in g.neighbors[i]) for i in range(g.n)):
            yield x


def test_two_variable_reduction():
    p = ising(1, -2, 3)
    c = offset_for(p)
    assert c == 3
    red = build_reduction(p)
    assert red.graph.n == 8
    w = red.graph.weights
    assert w[red.node_of(0, [1])] == c + 1
    assert w[red.node_of(1, [1])] == c - 2
    assert w[red.node_of(2, [1, 1])] == c + 3
    others = [k for k in range(8) if k not in (red.node_of(0, [1]), red.node_of(1, [1]),
                                               red.node_of(2, [1, 1]))]
    assert np.all(w[others] == c)
    best = brute_force_mwis(red.graph)
    s = best.optima[0]
    chosen = {red.labels[k] for k in np.flatnonzero(s)}
    assert chosen == {(0, (1,)), (1, (1,)), (2, (1, 1))}
    assert lift(red, s) == (1, 1)


def test_single_factor_reduction():
    red = build_reduction(MapProblem.from_tables([2], [([0], [0.0, 0.0])]))
    assert red.graph.n == 2 and red.graph.m == 1
    assert red.graph.weights.tolist() == [1.0, 1.0]


def test_disjoint_singletons_unconnected():
    red = build_reduction(MapProblem.from_tables([2, 3], [([0], [1, 2]), ([1], [0, 1, 2])]))
    cross = [(i, j) for i, j in red.graph.edges.tolist()
             if red.labels[i][0] != red.labels[j][0]]
    assert cross == []


def test_lift_errors():
    red = build_reduction(ising(1, -2, 3))
    with pytest.raises(NotLiftable):
        lift(red, np.zeros(8, dtype=int))
    with pytest.raises(ValueError):
        lift(red, np.ones(8, dtype=int))


def test_map_examples():
    r = map_via_mwis(ising(1, -2, 3))
    assert r.assignment == (1, 1) and r.score == 2
    one = MapProblem.from_tables([2], [([0], [5.0, 1.0])])
    assert map_via_mwis(one).assignment == (0,) and map_via_mwis(one).score == 5
    assert brute_force_map(ising(1, -2, 3)) == ((1, 1), 2.0)
    zero = MapProblem.from_tables([2, 3], [([0, 1], np.zeros(6))])
    assert brute_force_map(zero) == ((0, 0), 0.0)
    assert brute_force_map(one) == ((0,), 5.0)


def test_heuristic_solver_failure_is_reported():
    with pytest.raises(NotLiftable):
        map_via_mwis(ising(1, -2, 3), solver=lambda g: np.zeros(g.n, dtype=int))


def test_invalid_models():
    with pytest.raises(ReductionError):
        MapProblem.from_tables([2], [([0], [1.0, 2.0, 3.0])])
    with pytest.raises(ReductionError):
        MapProblem.from_tables([2, 2], [([0], [1.0, 2.0])])
    with pytest.raises(ReductionError):
        MapProblem.from_tables([2], [([0], [np.nan, 1.0])])
    with pytest.raises(ReductionError):
        build_reduction(MapProblem.from_tables([10] * 5, [(list(range(5)), np.zeros(10**5))]),
                        budget=1000)


@given(st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_maximal_sets_lift(seed):
    p = random_factor_model(np.random.default_rng(seed), max_vars=2, max_domain=3, max_factors=3)
    red = build_reduction(p)
    if red.graph.n > 14:
        return
    for s in maximal_independent_sets(red.graph):
        y = lift(red, s)
        assert np.array_equal(red.nodes_for(y), s)


@given(st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_round_trip_and_weight_identity(seed):
    p = random_factor_model(np.random.default_rng(seed))
    r = map_via_mwis(p)
    y, best = brute_force_map(p)
    assert r.score == pytest.approx(best, abs=1e-9)
    assert identity_error(r) <= storage_bound(r)


def identity_error(r):
    """|MWIS weight - (sum of phi(y*) + c |A|)| in exact arithmetic."""
    red = r.reduction
    chosen = red.nodes_for(r.assignment)
    lhs = sum(Fraction(float(w)) for w in red.graph.weights[chosen == 1])
    rhs = sum(Fraction(float(f.table[tuple(r.assignment[v] for v in f.scope)]))
              for f in red.problem.factors)
    rhs += len(red.problem.factors) * Fraction(red.offset)
    return abs(lhs - rhs)


def storage_bound(r):
    # each node weight c + phi is rounded once when stored
    w = r.reduction.graph.weights
    return sum(Fraction(math.ulp(float(x))) / 2 for x in w[r.reduction.nodes_for(r.assignment) == 1])


@given(st.integers(0, 2**31))
@settings(max_examples=60, deadline=None)
def test_weight_identity_exact_on_dyadic_tables(seed):
    rng = np.random.default_rng(seed)
    p = random_factor_model(rng)
    p = MapProblem.from_tables(p.domains, [(f.scope, np.round(f.table.reshape(-1) * 256) / 256)
                                           for f in p.factors])
    r = map_via_mwis(p)
    assert identity_error(r) == 0
    assert r.mwis_weight == math.fsum(
        [float(f.table[tuple(r.assignment[v] for v in f.scope)]) for f in p.factors]
        + [r.reduction.offset] * len(p.factors))

"""Unwrapped computation trees and exact root-membership by tree DP.

``build(graph, i, t)`` materializes ``T_i(t)``: level 0 is the root copy
of ``i``; every vertex on level ``d`` that copies node ``u`` with parent
copy of ``p`` gets one child per ``N(u) \\ {p}`` on level ``d + 1``.
Levels stop at ``t - 1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph
from .maxprod import Estimate

VERTEX_BUDGET = 10**6


class TreeTooLarge(RuntimeError):
    pass


class Membership(enum.Enum):
    IN_EVERY_MWIS = "in-every"
    IN_NO_MWIS = "in-none"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class ComputationTree:
    """Vertices in BFS order; vertex 0 is the root.

    ``node[v]`` is the original graph node copied by ``v``, ``parent[v]``
    its parent vertex (``-1`` at the root) and ``level[v]`` its depth.
    """

    node: np.ndarray
    parent: np.ndarray
    level: np.ndarray
    weight: np.ndarray
    depth: int

    @property
    def size(self) -> int:
        return len(self.node)

    @property
    def root(self) -> int:
        return 0

    def children(self, v: int) -> np.ndarray:
        return np.flatnonzero(self.parent == v)

    def truncate(self, t: int) -> "ComputationTree":
        """``T_i(t)`` for ``t <= depth``, as a prefix of this tree."""
        if not 1 <= t <= self.depth:
            raise ValueError(f"cannot truncate depth-{self.depth} tree to {t}")
        k = int(np.searchsorted(self.level, t))
        return ComputationTree(self.node[:k], self.parent[:k], self.level[:k],
                               self.weight[:k], t)


def build(graph: WeightedGraph, root: int, t: int, budget: int = VERTEX_BUDGET) -> ComputationTree:
    if t < 1:
        raise ValueError("tree depth must be >= 1")
    nodes = [root]
    parents = [-1]
    levels = [0]
    frontier = [(0, root, -1)]  # (vertex, node, parent node)
    for d in range(1, t):
        nxt = []
        for v, u, p in frontier:
            for k in graph.neighbors[u]:
                if k == p:
                    continue
                nxt.append((len(nodes), k, u))
                nodes.append(k)
                parents.append(v)
                levels.append(d)
                if len(nodes) > budget:
                    raise TreeTooLarge(f"T_{root}({t}) exceeds {budget} vertices")
        if not nxt:
            break
        frontier = nxt
    node = np.array(nodes, dtype=np.int64)
    return ComputationTree(node, np.array(parents, dtype=np.int64),
                           np.array(levels, dtype=np.int64), graph.weights[node], t)


def expected_size(graph: WeightedGraph, root: int, t: int) -> int:
    """Vertex count of ``T_root(t)`` from the branching recurrence.

    Counts walks that never immediately backtrack, level by level, via
    per-(node, came-from) multiplicities rather than a tree walk.
    """
    if t < 1:
        raise ValueError("tree depth must be >= 1")
    total = 1
    layer = {(root, -1): 1}
    for _ in range(1, t):
        nxt: dict[tuple[int, int], int] = {}
        for (u, p), c in layer.items():
            for k in graph.neighbors[u]:
                if k != p:
                    nxt[(k, u)] = nxt.get((k, u), 0) + c
        if not nxt:
            break
        total += sum(nxt.values())
        layer = nxt
    return total


def tree_dp(tree: ComputationTree) -> tuple[np.ndarray, np.ndarray]:
    """Best subtree weight with / without each vertex, bottom-up by level."""
    with_v = tree.weight.astype(np.float64).copy()
    without = np.zeros(tree.size)
    for d in range(int(tree.level.max()), 0, -1):
        vs = np.flatnonzero(tree.level == d)
        par = tree.parent[vs]
        np.add.at(with_v, par, without[vs])
        np.add.at(without, par, np.maximum(with_v[vs], without[vs]))
    return with_v, without


def root_values(tree: ComputationTree) -> tuple[float, float]:
    with_v, without = tree_dp(tree)
    return float(with_v[0]), float(without[0])


def root_membership(tree: ComputationTree) -> Membership:
    best_with, best_without = root_values(tree)
    tol = 1e-9 * float(tree.weight.sum())
    if best_with > best_without + tol:
        return Membership.IN_EVERY_MWIS
    if best_with < best_without - tol:
        return Membership.IN_NO_MWIS
    return Membership.AMBIGUOUS


_TO_ESTIMATE = {
    Membership.IN_EVERY_MWIS: Estimate.ONE,
    Membership.IN_NO_MWIS: Estimate.ZERO,
    Membership.AMBIGUOUS: Estimate.UNKNOWN,
}


def oracle_estimate(graph: WeightedGraph, i: int, t: int) -> Estimate:
    return _TO_ESTIMATE[root_membership(build(graph, i, t))]


def oracle_estimates(graph: WeightedGraph, t_max: int) -> np.ndarray:
    """Oracle decisions for every node and every depth ``1..t_max``.

    Row ``t - 1`` holds the decisions on ``T_i(t)``; each root's deepest
    tree is built once and truncated for the shallower depths.
    """
    out = np.empty((t_max, graph.n), dtype=np.int64)
    for i in range(graph.n):
        full = build(graph, i, t_max)
        for t in range(1, t_max + 1):
            out[t - 1, i] = _TO_ESTIMATE[root_membership(full.truncate(t))]
    return out

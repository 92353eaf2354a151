"""Weighted undirected graphs for MWIS instances."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np


class GraphError(ValueError):
    """Raised when a graph violates its structural invariants."""


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected simple graph with strictly positive node weights.

    Nodes are ``0..n-1``. Edges are stored once, as ``(i, j)`` with
    ``i < j``, sorted lexicographically. Construct through
    :meth:`from_edges` to get validation and canonical ordering.

    Directed edges (message slots) are laid out as ``2*e`` for
    ``i -> j`` and ``2*e + 1`` for ``j -> i`` where ``edges[e] == (i, j)``.
    """

    weights: np.ndarray
    edges: np.ndarray
    neighbors: tuple = field(repr=False)

    @classmethod
    def from_edges(cls, weights, edges=()) -> "WeightedGraph":
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        pairs = [tuple(int(v) for v in e) for e in edges]
        problems = _violations(w, pairs)
        if problems:
            raise GraphError("; ".join(problems))
        canon = sorted({(min(i, j), max(i, j)) for i, j in pairs})
        e = np.array(canon, dtype=np.int64).reshape(-1, 2)
        nbrs = [[] for _ in range(len(w))]
        for i, j in canon:
            nbrs[i].append(j)
            nbrs[j].append(i)
        w.setflags(write=False)
        e.setflags(write=False)
        return cls(w, e, tuple(tuple(sorted(a)) for a in nbrs))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.neighbors[i])

    @property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.neighbors], dtype=np.int64)

    @property
    def isolated(self) -> np.ndarray:
        """Boolean mask of degree-0 nodes."""
        return self.degrees == 0

    @property
    def directed_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """``(src, dst)`` arrays of length ``2m`` in message-slot order."""
        src = np.empty(2 * self.m, dtype=np.int64)
        dst = np.empty(2 * self.m, dtype=np.int64)
        src[0::2], dst[0::2] = self.edges[:, 0], self.edges[:, 1]
        src[1::2], dst[1::2] = self.edges[:, 1], self.edges[:, 0]
        return src, dst

    def edge_index(self) -> dict[tuple[int, int], int]:
        """Map from both orientations of every edge to its row in ``edges``."""
        idx = {}
        for k, (i, j) in enumerate(self.edges.tolist()):
            idx[(i, j)] = k
            idx[(j, i)] = k
        return idx

    def incidence(self) -> np.ndarray:
        """Dense ``n x m`` node/edge incidence matrix."""
        a = np.zeros((self.n, self.m))
        if self.m:
            cols = np.arange(self.m)
            a[self.edges[:, 0], cols] = 1.0
            a[self.edges[:, 1], cols] = 1.0
        return a

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (np.array_equal(self.weights, other.weights)
                and np.array_equal(self.edges, other.edges))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def _violations(w: np.ndarray, pairs: list[tuple[int, int]]) -> list[str]:
    out = []
    n = len(w)
    if n == 0:
        out.append("graph has no nodes")
    for i, wi in enumerate(w):
        if not np.isfinite(wi):
            out.append(f"non-finite weight at node {i}")
        elif wi <= 0:
            out.append(f"non-positive weight at node {i}")
    seen = set()
    for e in pairs:
        if len(e) != 2:
            out.append(f"malformed edge {e}")
            continue
        i, j = e
        if not (0 <= i < n and 0 <= j < n):
            out.append(f"edge ({i},{j}) references unknown node")
            continue
        if i == j:
            out.append(f"self-loop at node {i}")
            continue
        key = (min(i, j), max(i, j))
        if key in seen:
            out.append(f"duplicate edge ({key[0]},{key[1]})")
        seen.add(key)
    return out


def validate(weights, edges=()) -> list[str]:
    """Return every invariant violation of a candidate instance.

    An empty list means :meth:`WeightedGraph.from_edges` will accept it.
    """
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    return _violations(w, [tuple(int(v) for v in e) for e in edges])


def _as_indicator(graph: WeightedGraph, s) -> np.ndarray:
    x = np.asarray(s)
    if x.shape != (graph.n,):
        raise ValueError(f"subset has length {x.size}, graph has {graph.n} nodes")
    return x.astype(np.int64)


def is_independent(graph: WeightedGraph, s) -> bool:
    x = _as_indicator(graph, s)
    if graph.m == 0:
        return True
    return bool(np.all(x[graph.edges[:, 0]] + x[graph.edges[:, 1]] <= 1))


def subset_weight(graph: WeightedGraph, s) -> float:
    x = _as_indicator(graph, s)
    return float(graph.weights @ x)


@dataclass(frozen=True)
class Bipartition:
    """Outcome of :func:`bipartition`.

    Exactly one of ``colors`` (0/1 per node) and ``odd_cycle`` (closed
    walk of node ids, first node not repeated) is set.
    """

    colors: np.ndarray | None = None
    odd_cycle: list[int] | None = None

    @property
    def is_bipartite(self) -> bool:
        return self.colors is not None


def bipartition(graph: WeightedGraph) -> Bipartition:
    """Two-color every component by BFS, or return an odd cycle."""
    color = np.full(graph.n, -1, dtype=np.int64)
    parent = np.full(graph.n, -1, dtype=np.int64)
    for root in range(graph.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.neighbors[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    queue.append(v)
                elif color[v] == color[u]:
                    return Bipartition(odd_cycle=_cycle_through(parent, u, v))
    return Bipartition(colors=color)


def _cycle_through(parent: np.ndarray, u: int, v: int) -> list[int]:
    # u and v are adjacent with equal BFS parity; join their tree paths.
    def path(x):
        p = [x]
        while parent[p[-1]] >= 0:
            p.append(int(parent[p[-1]]))
        return p

    pu, pv = path(u), path(v)
    common = set(pu) & set(pv)
    a = next(k for k, x in enumerate(pu) if x in common)
    b = pv.index(pu[a])
    return pu[: a + 1] + pv[:b][::-1]

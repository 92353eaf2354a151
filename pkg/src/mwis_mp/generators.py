"""Seeded instance generators."""

from __future__ import annotations

import numpy as np

from .graph import WeightedGraph
from .map_reduction import MapProblem

KINDS = ("random-gnp", "random-bipartite", "cycle", "path")


def _weights(rng: np.random.Generator, n: int, weight) -> np.ndarray:
    if weight is not None:
        return np.full(n, float(weight))
    # uniform on (0, 1]
    return 1.0 - rng.random(n)


def generate_instance(kind: str, n: int, p: float = 0.4, seed: int = 0,
                      weight: float | None = None, left: int | None = None) -> WeightedGraph:
    """Build a graph of the given ``kind`` on ``n`` nodes.

    ``p`` is the edge probability for the random kinds. For
    ``random-bipartite`` the first ``left`` nodes (default ``n // 2``)
    form one side. ``weight`` fixes every node weight.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown instance kind {kind!r}; choose from {KINDS}")
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if weight is not None and not weight > 0:
        raise ValueError("weight override must be positive")
    rng = np.random.default_rng(seed)
    w = _weights(rng, n, weight)
    if kind == "path":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "cycle":
        if n < 3:
            raise ValueError("a cycle needs at least 3 nodes")
        edges = [(i, (i + 1) % n) for i in range(n)]
    else:
        iu, ju = np.triu_indices(n, k=1)
        keep = rng.random(len(iu)) < p
        if kind == "random-bipartite":
            left = n // 2 if left is None else left
            if not 0 <= left <= n:
                raise ValueError("left side size out of range")
            keep &= (iu < left) != (ju < left)
        edges = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    return WeightedGraph.from_edges(w, edges)


def random_factor_model(rng: np.random.Generator, max_vars: int = 3, max_domain: int = 3,
                        max_factors: int = 4, scale: float = 3.0) -> MapProblem:
    """Random discrete model; every variable is covered by some factor."""
    m = int(rng.integers(1, max_vars + 1))
    domains = [int(rng.integers(2, max_domain + 1)) for _ in range(m)]
    k = int(rng.integers(1, max_factors + 1))
    scopes = []
    for _ in range(k):
        size = int(rng.integers(1, m + 1))
        scopes.append(sorted(rng.choice(m, size=size, replace=False).tolist()))
    covered = set(v for s in scopes for v in s)
    for v in range(m):
        if v not in covered:
            host = scopes[int(rng.integers(len(scopes)))]
            host.append(v)
            host.sort()
    factors = []
    for s in scopes:
        size = int(np.prod([domains[v] for v in s]))
        factors.append((s, rng.uniform(-scale, scale, size)))
    return MapProblem.from_tables(domains, factors)

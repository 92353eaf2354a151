"""Primal recovery from an approximate dual optimum by node coloring.

Colors mean: gray ``x=0`` (forced out by dual slack or by a chosen
neighbor), orange ``x=1`` (forced in by a gray neighbor whose shared
edge carries dual mass), red ``x=1`` (left undecided and admitted at the
end), green undecided.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .descent import BarrierParams, DescentResult, run_descent
from .graph import WeightedGraph, bipartition, is_independent
from .oracles import node_loads


class Color(enum.Enum):
    GREEN = "green"
    GRAY = "gray"
    ORANGE = "orange"
    RED = "red"


_VALUE = {Color.GRAY: 0, Color.ORANGE: 1, Color.RED: 1}


@dataclass
class Recovery:
    x: np.ndarray
    colors: list[Color]
    rounds: int
    changes: list[int]

    def counts(self) -> dict[str, int]:
        return {c.value: sum(1 for k in self.colors if k is c) for c in Color}


def est_recover(graph: WeightedGraph, lam, delta1: float) -> Recovery:
    """Color nodes from dual vector ``lam`` and read off a 0/1 vector.

    Propagation runs in round-robin passes over nodes in increasing id
    until a pass changes nothing; ``rounds`` counts every pass, the
    final idle one included. Leftover green nodes all turn red at once.
    """
    if delta1 < 0:
        raise ValueError("delta1 must be non-negative")
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(lam < 0):
        raise ValueError("dual vector must be non-negative")
    idx = graph.edge_index()
    load = node_loads(graph, lam)
    colors = [Color.GRAY if load[i] > graph.weights[i] + delta1 else Color.GREEN
              for i in range(graph.n)]
    rounds = 0
    changes = []
    while True:
        rounds += 1
        changed = 0
        for i in range(graph.n):
            if colors[i] is not Color.GREEN:
                continue
            nb = graph.neighbors[i]
            if any(colors[j] is Color.GRAY and lam[idx[(i, j)]] > delta1 for j in nb):
                colors[i] = Color.ORANGE
                changed += 1
            elif any(colors[j] is Color.ORANGE for j in nb):
                colors[i] = Color.GRAY
                changed += 1
        changes.append(changed)
        if not changed:
            break
    colors = [Color.RED if c is Color.GREEN else c for c in colors]
    x = np.array([_VALUE[c] for c in colors], dtype=np.int64)
    return Recovery(x, colors, rounds, changes)


def default_delta1(eps: float) -> float:
    """Recovery threshold scaled to the barrier weight.

    At the smoothed optimum every edge carrying dual mass has an end
    whose slack is at most ``2 * eps``, so thresholds just above that
    separate tight nodes from slack ones without swallowing small
    weight margins.
    """
    return 2.5 * eps


@dataclass
class AlgoResult:
    x: np.ndarray
    descent: DescentResult
    recovery: Recovery
    delta1: float
    warnings: list[str] = field(default_factory=list)

    @property
    def independent(self) -> bool:
        return not any("not independent" in w for w in self.warnings)


def algo_mwis(graph: WeightedGraph, eps: float = 1e-3, delta: float = 1e-8,
              delta1: float | None = None, max_sweeps: int = 100_000,
              residuals: str = "exact") -> AlgoResult:
    """Barrier dual descent followed by coloring recovery.

    Always returns a 0/1 vector. Conditions that void the optimality
    guarantee (non-bipartite graph, unconverged descent, dependent
    output) are reported in ``warnings`` rather than raised.
    """
    params = BarrierParams(eps, delta, max_sweeps, residuals)
    if delta1 is None:
        delta1 = default_delta1(eps)
    desc = run_descent(graph, params)
    rec = est_recover(graph, desc.lam, delta1)
    warnings = list(desc.notes)
    if not bipartition(graph).is_bipartite:
        warnings.append("graph is not bipartite; output carries no optimality guarantee")
    if not is_independent(graph, rec.x):
        warnings.append("recovered set is not independent")
    return AlgoResult(rec.x, desc, rec, delta1, warnings)

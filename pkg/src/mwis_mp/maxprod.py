"""Min-sum (log-ratio) max-product for MWIS.

Messages live on directed edges in the slot order of
:attr:`WeightedGraph.directed_edges`. A message ``gamma[i->j]`` is
``log m_{i->j}(0) / m_{i->j}(1)``; the update is

    gamma'[i->j] = max(0, w_i - sum_{k in N(i), k != j} gamma[k->i])

applied to every directed edge at once from the same input field.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .graph import WeightedGraph


class Estimate(enum.IntEnum):
    ZERO = 0
    ONE = 1
    UNKNOWN = 2

    def __str__(self):
        return {0: "0", 1: "1", 2: "?"}[int(self)]


def default_tau(graph: WeightedGraph) -> float:
    return 1e-9 * max(1.0, float(graph.weights.max()))


def zero_messages(graph: WeightedGraph) -> np.ndarray:
    return np.zeros(2 * graph.m)


def _reverse(graph: WeightedGraph) -> np.ndarray:
    # slot of j->i for every slot i->j
    rev = np.arange(2 * graph.m)
    rev[0::2] += 1
    rev[1::2] -= 1
    return rev


def incoming(graph: WeightedGraph, gamma: np.ndarray) -> np.ndarray:
    """Per-node sum of messages arriving at that node."""
    _, dst = graph.directed_edges
    return np.bincount(dst, weights=gamma, minlength=graph.n)


def sweep(graph: WeightedGraph, gamma: np.ndarray) -> np.ndarray:
    """One synchronous min-sum update; returns a new field."""
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.shape != (2 * graph.m,):
        raise ValueError("message field does not match graph")
    if graph.m == 0:
        return gamma.copy()
    src, _ = graph.directed_edges
    total = incoming(graph, gamma)
    excl = total[src] - gamma[_reverse(graph)]
    return np.maximum(graph.weights[src] - excl, 0.0)


def sweep_reference(graph: WeightedGraph, gamma) -> np.ndarray:
    """Loop-by-loop min-sum update, summing each exclusion set directly.

    Slow; kept as an independent check on :func:`sweep`.
    """
    src, dst = graph.directed_edges
    slot = {(int(a), int(b)): s for s, (a, b) in enumerate(zip(src, dst))}
    out = np.zeros(2 * graph.m)
    for s, (i, j) in enumerate(zip(src.tolist(), dst.tolist())):
        acc = 0.0
        for k in graph.neighbors[i]:
            if k != j:
                acc += gamma[slot[(k, i)]]
        out[s] = max(graph.weights[i] - acc, 0.0)
    return out


def belief_gaps(graph: WeightedGraph, gamma: np.ndarray) -> np.ndarray:
    """``w_i - sum_k gamma[k->i]`` for every node."""
    return graph.weights - incoming(graph, gamma)


def belief_gap(graph: WeightedGraph, gamma: np.ndarray, i: int) -> float:
    return float(belief_gaps(graph, gamma)[i])


def estimate(graph: WeightedGraph, gamma: np.ndarray, tau: float | None = None) -> np.ndarray:
    """Ternary decisions as an int array of :class:`Estimate` codes."""
    if tau is None:
        tau = default_tau(graph)
    if tau < 0:
        raise ValueError("tau must be non-negative")
    gap = belief_gaps(graph, gamma)
    out = np.full(graph.n, Estimate.UNKNOWN, dtype=np.int64)
    out[gap > tau] = Estimate.ONE
    out[gap < -tau] = Estimate.ZERO
    return out


def fixed_point_residual(graph: WeightedGraph, gamma: np.ndarray) -> float:
    if graph.m == 0:
        return 0.0
    return float(np.max(np.abs(np.asarray(gamma) - sweep(graph, gamma))))


@dataclass
class MaxProductTrace:
    """Record of a max-product run.

    ``messages[t]`` and ``estimates[t]`` are the state after ``t`` sweeps,
    so both lists hold ``iterations + 1`` entries.
    """

    messages: list[np.ndarray]
    estimates: list[np.ndarray]
    changes: list[float]
    converged: bool
    iterations: int
    tau: float
    window: int
    params: dict = field(default_factory=dict)

    @property
    def final_messages(self) -> np.ndarray:
        return self.messages[-1]

    @property
    def final_estimate(self) -> np.ndarray:
        return self.estimates[-1]

    def oscillation_period(self, max_period: int = 8, tail: int = 16) -> int | None:
        """Smallest period of the estimate sequence over its tail, if any.

        Returns ``1`` for a settled sequence and ``None`` if no period up
        to ``max_period`` explains the last ``tail`` estimates.
        """
        seq = self.estimates
        if len(seq) < 2:
            return 1
        tail = min(tail, len(seq))
        window = seq[-tail:]
        for p in range(1, max_period + 1):
            if p >= len(window):
                break
            if all(np.array_equal(window[k], window[k - p]) for k in range(p, len(window))):
                return p
        return None


def run(graph: WeightedGraph, max_iters: int = 200, tau: float | None = None,
        window: int = 3, init: np.ndarray | None = None) -> MaxProductTrace:
    """Iterate synchronous sweeps until the estimates settle.

    Convergence requires the estimate vector to be identical over
    ``window`` consecutive iterations and the last sweep to move no
    message by ``tau`` or more. A sweep that changes nothing at all has
    landed on an exact fixed point and ends the run regardless of the
    window, since every later state would repeat it.
    """
    if max_iters < 1 or window < 1:
        raise ValueError("max_iters and window must be >= 1")
    if tau is None:
        tau = default_tau(graph)
    gamma = zero_messages(graph) if init is None else np.array(init, dtype=np.float64)
    messages = [gamma]
    estimates = [estimate(graph, gamma, tau)]
    changes = []
    converged = False
    t = 0
    while t < max_iters:
        new = sweep(graph, gamma)
        changes.append(float(np.max(np.abs(new - gamma))) if graph.m else 0.0)
        gamma = new
        t += 1
        messages.append(gamma)
        estimates.append(estimate(graph, gamma, tau))
        stable = len(estimates) >= window and all(
            np.array_equal(estimates[-1], e) for e in estimates[-window:])
        if (stable and changes[-1] < tau) or changes[-1] == 0.0:
            converged = True
            break
    return MaxProductTrace(messages, estimates, changes, converged, t, tau, window,
                           params={"max_iters": max_iters})


@dataclass(frozen=True)
class StructureViolation:
    clause: int
    node: int
    detail: str


def check_fixed_point_structure(graph: WeightedGraph, est) -> list[StructureViolation]:
    """Check the three neighborhood clauses that fixed-point estimates obey.

    1. a One node has only Zero neighbors;
    2. a Zero node has at least one One neighbor;
    3. an Unknown node has at least one Unknown neighbor.
    """
    est = np.asarray(est)
    out = []
    for i in range(graph.n):
        nb = [est[j] for j in graph.neighbors[i]]
        if est[i] == Estimate.ONE:
            bad = [j for j in graph.neighbors[i] if est[j] != Estimate.ZERO]
            if bad:
                out.append(StructureViolation(1, i, f"non-Zero neighbors {bad}"))
        elif est[i] == Estimate.ZERO:
            if Estimate.ONE not in nb:
                out.append(StructureViolation(2, i, "no One neighbor"))
        elif Estimate.UNKNOWN not in nb:
            out.append(StructureViolation(3, i, "no Unknown neighbor"))
    return out


def as_symbols(est) -> str:
    return "".join(str(Estimate(int(v))) for v in est)

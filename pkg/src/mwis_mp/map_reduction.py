"""MAP estimation in discrete factor models, reduced to MWIS.

Every ``(factor, local assignment)`` pair becomes a node of an auxiliary
graph weighted ``c + phi``; two nodes are adjacent when their local
assignments disagree on a shared variable. Maximal independent sets of
that graph are in one-to-one correspondence with global assignments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .graph import WeightedGraph, is_independent
from .oracles import branch_and_bound_mwis, brute_force_mwis

NODE_BUDGET = 10**5
JOINT_BUDGET = 10**6
SCAN_NODES = 16  # exhaustive scan up to here, branch and bound above


class ReductionError(ValueError):
    pass


class NotLiftable(ValueError):
    pass


@dataclass(frozen=True)
class Factor:
    """Table over an ordered scope, row-major in scope order."""

    scope: tuple[int, ...]
    table: np.ndarray


@dataclass(frozen=True)
class MapProblem:
    domains: tuple[int, ...]
    factors: tuple[Factor, ...]

    @classmethod
    def from_tables(cls, domains: Sequence[int], factors) -> "MapProblem":
        """Build and validate from ``[(scope, flat_table), ...]``."""
        domains = tuple(int(d) for d in domains)
        built = []
        for scope, table in factors:
            scope = tuple(int(v) for v in scope)
            t = np.asarray(table, dtype=np.float64)
            shape = tuple(domains[v] for v in scope) if all(
                0 <= v < len(domains) for v in scope) else None
            if shape is not None and t.size == int(np.prod(shape)):
                t = t.reshape(shape)
            built.append(Factor(scope, t))
        problem = cls(domains, tuple(built))
        problems = problem.violations()
        if problems:
            raise ReductionError("; ".join(problems))
        return problem

    @property
    def num_vars(self) -> int:
        return len(self.domains)

    def violations(self) -> list[str]:
        out = []
        if any(d < 1 for d in self.domains):
            out.append("every domain needs at least one value")
        seen = set()
        for a, f in enumerate(self.factors):
            if not f.scope:
                out.append(f"factor {a} has an empty scope")
                continue
            if len(set(f.scope)) != len(f.scope):
                out.append(f"factor {a} repeats a variable")
            if any(not 0 <= v < self.num_vars for v in f.scope):
                out.append(f"factor {a} references an unknown variable")
                continue
            shape = tuple(self.domains[v] for v in f.scope)
            if f.table.shape != shape:
                out.append(f"factor {a} table has shape {f.table.shape}, expected {shape}")
            elif not np.all(np.isfinite(f.table)):
                out.append(f"factor {a} has a non-finite entry")
            seen.update(f.scope)
        missing = sorted(set(range(self.num_vars)) - seen)
        if missing:
            out.append(f"variables {missing} appear in no factor")
        return out

    def score(self, y) -> float:
        return float(sum(f.table[tuple(y[v] for v in f.scope)] for f in self.factors))


@dataclass(frozen=True)
class MwisReduction:
    """Auxiliary graph plus the ``(factor, local assignment)`` of each node."""

    problem: MapProblem
    graph: WeightedGraph
    labels: tuple[tuple[int, tuple[int, ...]], ...]
    offset: float

    def node_of(self, factor: int, local: Sequence[int]) -> int:
        return self.labels.index((factor, tuple(int(v) for v in local)))

    def nodes_for(self, y) -> np.ndarray:
        """Indicator of the one node per factor consistent with ``y``."""
        s = np.zeros(self.graph.n, dtype=np.int64)
        for a, f in enumerate(self.problem.factors):
            s[self.node_of(a, [y[v] for v in f.scope])] = 1
        return s


def offset_for(problem: MapProblem) -> float:
    low = min(float(f.table.min()) for f in problem.factors)
    return 1.0 + max(0.0, -low)


def build_reduction(problem: MapProblem, budget: int = NODE_BUDGET) -> MwisReduction:
    count = sum(int(f.table.size) for f in problem.factors)
    if count > budget:
        raise ReductionError(f"reduction needs {count} nodes, budget is {budget}")
    c = offset_for(problem)
    labels = []
    weights = []
    for a, f in enumerate(problem.factors):
        for local in itertools.product(*(range(problem.domains[v]) for v in f.scope)):
            labels.append((a, local))
            weights.append(c + float(f.table[local]))
    edges = []
    for p, q in itertools.combinations(range(len(labels)), 2):
        (a1, y1), (a2, y2) = labels[p], labels[q]
        s1, s2 = problem.factors[a1].scope, problem.factors[a2].scope
        pos2 = {v: k for k, v in enumerate(s2)}
        if any(v in pos2 and y1[k] != y2[pos2[v]] for k, v in enumerate(s1)):
            edges.append((p, q))
    return MwisReduction(problem, WeightedGraph.from_edges(weights, edges), tuple(labels), c)


def lift(reduction: MwisReduction, s) -> tuple[int, ...]:
    """Global assignment selected by an independent set of the auxiliary graph.

    Raises :class:`NotLiftable` unless ``s`` is independent, holds
    exactly one node per factor and those nodes fix every variable.
    """
    s = np.asarray(s)
    if not is_independent(reduction.graph, s):
        raise NotLiftable("node set is not independent")
    picked: dict[int, tuple[int, ...]] = {}
    for node in np.flatnonzero(s):
        a, local = reduction.labels[node]
        if a in picked:
            raise NotLiftable(f"factor {a} has more than one chosen node")
        picked[a] = local
    problem = reduction.problem
    if len(picked) != len(problem.factors):
        missing = sorted(set(range(len(problem.factors))) - set(picked))
        raise NotLiftable(f"factors {missing} have no chosen node")
    y = [-1] * problem.num_vars
    for a, local in picked.items():
        for v, val in zip(problem.factors[a].scope, local):
            y[v] = val
    return tuple(y)


def exact_solver(graph: WeightedGraph) -> np.ndarray:
    """Exhaustive scan on small graphs, branch and bound beyond that."""
    if graph.n <= SCAN_NODES:
        return brute_force_mwis(graph).optima[0]
    return branch_and_bound_mwis(graph)[1]


@dataclass
class MapResult:
    assignment: tuple[int, ...]
    score: float
    mwis_weight: float
    reduction: MwisReduction
    diagnostics: dict


def map_via_mwis(problem: MapProblem, solver: Callable[[WeightedGraph], np.ndarray] = exact_solver) -> MapResult:
    """Solve MAP by handing the auxiliary graph to ``solver`` and lifting.

    ``solver`` maps a :class:`WeightedGraph` to a 0/1 node vector. A
    result that cannot be lifted raises :class:`NotLiftable`.
    """
    red = build_reduction(problem)
    s = np.asarray(solver(red.graph))
    y = lift(red, s)
    weight = float(red.graph.weights @ s)
    diag = {"nodes": red.graph.n, "edges": red.graph.m, "offset": red.offset}
    return MapResult(y, problem.score(y), weight, red, diag)


def brute_force_map(problem: MapProblem) -> tuple[tuple[int, ...], float]:
    """Exact argmax, lexicographically smallest among ties."""
    size = int(np.prod(problem.domains))
    if size > JOINT_BUDGET:
        raise ReductionError(f"joint space has {size} assignments, budget is {JOINT_BUDGET}")
    best, arg = -np.inf, None
    for y in itertools.product(*(range(d) for d in problem.domains)):
        v = problem.score(y)
        if v > best + 1e-12:
            best, arg = v, y
    return arg, best

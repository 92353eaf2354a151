"""Exact desk-scale references: brute-force IP, LP by half-integral
enumeration, dual feasibility and complementary-slackness certificates.

The LP is ``max w.x`` subject to ``x_i + x_j <= 1`` on edges and
``0 <= x <= 1``. The upper bound only matters for isolated nodes, which
otherwise make the relaxation unbounded. Every extreme point of this
polytope lies in ``{0, 1/2, 1}^n``, so scanning that grid is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph

MAX_IP_NODES = 24
MAX_LP_NODES = 15
TIE_TOL = 1e-9
_CHUNK = 1 << 18


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MwisReport:
    value: float
    optima: list[np.ndarray]

    @property
    def unique(self) -> bool:
        return len(self.optima) == 1


@dataclass(frozen=True)
class LpReport:
    """Optimal LP value and every optimal point of ``{0, 1/2, 1}^n``.

    Points are float arrays, listed in lexicographic order.
    """

    value: float
    optima: list[np.ndarray]

    @property
    def unique(self) -> bool:
        return len(self.optima) == 1

    @property
    def integral(self) -> bool:
        """Whether some optimum is integral, i.e. the relaxation is tight."""
        return any(np.all((p == 0) | (p == 1)) for p in self.optima)

    @property
    def fractional_nodes(self) -> np.ndarray:
        """Nodes carrying mass 1/2 in at least one listed optimum."""
        if not self.optima:
            return np.zeros(0, dtype=np.int64)
        half = np.any(np.stack(self.optima) == 0.5, axis=0)
        return np.flatnonzero(half)


def _bits(start: int, stop: int, n: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    return ((codes[:, None] >> np.arange(n)) & 1).astype(np.int8)


def _trits(start: int, stop: int, n: int) -> np.ndarray:
    codes = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(codes), n), dtype=np.int8)
    for k in range(n):
        out[:, k] = codes % 3
        codes //= 3
    return out


def _scan(graph: WeightedGraph, total: int, expand, cap: int, scale: float):
    best = -np.inf
    keep: list[np.ndarray] = []
    e0, e1 = graph.edges[:, 0], graph.edges[:, 1]
    for start in range(0, total, _CHUNK):
        pts = expand(start, min(total, start + _CHUNK), graph.n)
        if graph.m:
            pts = pts[np.all(pts[:, e0] + pts[:, e1] <= cap, axis=1)]
        if not len(pts):
            continue
        vals = (pts @ graph.weights) * scale
        best = max(best, vals.max())
        keep = [p for p in keep if float(p @ graph.weights) * scale >= best - TIE_TOL]
        keep.extend(pts[vals >= best - TIE_TOL])
    best_final = max(float(p @ graph.weights) * scale for p in keep)
    opt = [p.astype(np.float64) * scale for p in keep
           if float(p @ graph.weights) * scale >= best_final - TIE_TOL]
    opt.sort(key=lambda p: tuple(p))
    return best_final, opt


def brute_force_mwis(graph: WeightedGraph) -> MwisReport:
    """Exact MWIS value and the full set of maximizers by ``2^n`` scan."""
    if graph.n > MAX_IP_NODES:
        raise InstanceTooLarge(f"brute force limited to {MAX_IP_NODES} nodes")
    value, opt = _scan(graph, 1 << graph.n, _bits, 1, 1.0)
    return MwisReport(value, [p.astype(np.int64) for p in opt])


MAX_BNB_NODES = 400


def _clique_cover_bound(cand: int, order: list[int], adj: list[int], w: np.ndarray) -> float:
    # greedy cover of the candidates by cliques; each clique admits one node
    cliques: list[int] = []
    bound = 0.0
    for v in order:
        if not cand >> v & 1:
            continue
        for k, c in enumerate(cliques):
            if c & ~adj[v] == 0:
                cliques[k] = c | (1 << v)
                break
        else:
            cliques.append(1 << v)
            bound += w[v]
    return bound


def branch_and_bound_mwis(graph: WeightedGraph) -> tuple[float, np.ndarray]:
    """One maximum-weight independent set by depth-first branch and bound.

    Candidates are held as bitsets. Each subproblem is bounded by a
    greedy weighted clique cover (visited heaviest first, so each clique
    costs its first member) and branches on its heaviest candidate,
    taking it before leaving it out. Exact for any size it finishes on;
    the practical range is a few hundred nodes with clique-rich
    structure such as MAP reductions.
    """
    n = graph.n
    if n > MAX_BNB_NODES:
        raise InstanceTooLarge(f"branch and bound limited to {MAX_BNB_NODES} nodes")
    w = graph.weights
    adj = [0] * n
    for i, j in graph.edges.tolist():
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    order = sorted(range(n), key=lambda v: (-w[v], v))
    best_val = -1.0
    best_set = 0

    def search(cand: int, chosen: int, val: float):
        nonlocal best_val, best_set
        if cand == 0:
            if val > best_val:
                best_val, best_set = val, chosen
            return
        if val + _clique_cover_bound(cand, order, adj, w) <= best_val:
            return
        v = next(u for u in order if cand >> u & 1)
        search(cand & ~adj[v] & ~(1 << v), chosen | (1 << v), val + w[v])
        search(cand & ~(1 << v), chosen, val)

    search((1 << n) - 1, 0, 0.0)
    x = np.array([best_set >> v & 1 for v in range(n)], dtype=np.int64)
    return float(x @ w), x


def lp_optimum(graph: WeightedGraph) -> LpReport:
    if graph.n > MAX_LP_NODES:
        raise InstanceTooLarge(f"LP enumeration limited to {MAX_LP_NODES} nodes")
    value, opt = _scan(graph, 3 ** graph.n, _trits, 2, 0.5)
    return LpReport(value, opt)


@dataclass(frozen=True)
class DualReport:
    feasible: bool
    objective: float
    slacks: np.ndarray


def node_loads(graph: WeightedGraph, lam) -> np.ndarray:
    """``sum_{j in N(i)} lambda_ij`` per node; ``lam`` follows ``graph.edges``."""
    lam = np.asarray(lam, dtype=np.float64)
    if lam.shape != (graph.m,):
        raise ValueError("dual vector does not match graph edges")
    return graph.incidence() @ lam if graph.m else np.zeros(graph.n)


def dual_feasible(graph: WeightedGraph, lam, tol: float = 0.0) -> DualReport:
    """Feasibility, objective and per-node slack of a dual vector.

    Isolated nodes have no edge to cover them; they are priced by the
    bound ``x_i <= 1`` instead, which contributes ``w_i`` to the
    objective and reports zero slack.
    """
    lam = np.asarray(lam, dtype=np.float64)
    slacks = node_loads(graph, lam) - graph.weights
    iso = graph.isolated
    slacks[iso] = 0.0
    ok = bool(np.all(lam >= -tol) and np.all(slacks >= -tol))
    objective = float(lam.sum() + graph.weights[iso].sum())
    return DualReport(ok, objective, slacks)


@dataclass(frozen=True)
class SlacknessReport:
    holds: bool
    violations: list[str]


def check_complementary_slackness(graph: WeightedGraph, x, lam, tol: float = 1e-9) -> SlacknessReport:
    x = np.asarray(x, dtype=np.float64)
    lam = np.asarray(lam, dtype=np.float64)
    bad = []
    if x.shape != (graph.n,):
        raise ValueError("primal vector does not match graph")
    for i in np.flatnonzero((x != 0) & (x != 1)):
        bad.append(f"integrality: x[{i}]={x[i]}")
    for k, (i, j) in enumerate(graph.edges.tolist()):
        if x[i] + x[j] > 1:
            bad.append(f"feasibility: edge ({i},{j}) has both ends chosen")
        if abs((x[i] + x[j] - 1) * lam[k]) > tol:
            bad.append(f"edge slackness at ({i},{j}): lambda={lam[k]:.6g}")
    slacks = dual_feasible(graph, lam).slacks
    for i in range(graph.n):
        if abs(x[i] * slacks[i]) > tol:
            bad.append(f"node slackness at {i}: x={x[i]:g}, slack={slacks[i]:.6g}")
    return SlacknessReport(not bad, bad)

"""Command-line driver: ``mwis-mp <command> [instance] [flags]``.

Every command writes one JSON report (see ``schemas/report.schema.json``)
to ``--out`` or stdout. Exit status is 0 on success, 1 on bad input and
2 when an instance exceeds a size limit.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import comptree, maxprod
from .descent import BarrierParams, InteriorLost, run_descent
from .generators import KINDS, generate_instance
from .graph import WeightedGraph, bipartition, is_independent, subset_weight
from .io import FormatError, parse_factor_model, parse_graph, serialize_json, serialize_text
from .map_reduction import (NotLiftable, ReductionError, brute_force_map, build_reduction,
                            exact_solver, map_via_mwis)
from .oracles import (MAX_BNB_NODES, MAX_LP_NODES, InstanceTooLarge, brute_force_mwis,
                      check_complementary_slackness, dual_feasible, lp_optimum)
from .recovery import algo_mwis, default_delta1

COMMANDS = ("maxprod", "descent", "algo", "oracle", "comptree", "reduce-map", "verify", "generate")
SCHEMA_PATH = Path(__file__).parent / "schemas" / "report.schema.json"
SERIES_POINTS = 512
ORACLE_DEPTH = 6


class SizeLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    instance: str | None = None
    format: str = "auto"
    eps: float = 1e-3
    delta: float = 1e-8
    delta1: float | None = None
    tau: float | None = None
    max_iters: int = 200
    max_sweeps: int = 100_000
    window: int = 3
    residuals: str = "exact"
    root: int = 0
    depth: int = 3
    solver: str = "exact"
    kind: str = "random-gnp"
    n: int = 8
    p: float = 0.4
    weight: float | None = None
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("eps", "delta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.delta1 is not None and not self.delta1 >= 0:
            raise ValueError("delta1 must be non-negative")
        if self.tau is not None and not self.tau >= 0:
            raise ValueError("tau must be non-negative")
        for name in ("max_iters", "max_sweeps", "window", "depth", "n"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.solver not in ("exact", "algo", "maxprod"):
            raise ValueError("solver must be exact, algo or maxprod")
        if self.command not in ("generate",) and self.instance is None:
            raise ValueError(f"command {self.command!r} needs an instance path")

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)


def _clean(obj):
    # JSON-safe copy: numpy scalars/arrays to Python, non-finite floats to None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _series(values, points: int = SERIES_POINTS) -> dict:
    """Evenly thinned ``{"index": [...], "value": [...]}`` for plotting."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) <= points:
        idx = np.arange(len(values))
    else:
        idx = np.unique(np.linspace(0, len(values) - 1, points).round().astype(np.int64))
    return {"index": idx.tolist(), "value": values[idx].tolist()}


def _load_graph(cfg: RunConfig) -> WeightedGraph:
    return parse_graph(Path(cfg.instance).read_text(), cfg.format)


def _need(graph: WeightedGraph, limit: int, what: str):
    if graph.n > limit:
        raise SizeLimit(f"{what} is limited to {limit} nodes; instance has {graph.n}")


def _instance_info(graph: WeightedGraph) -> dict:
    return {"n": graph.n, "m": graph.m, "bipartite": bipartition(graph).is_bipartite,
            "isolated": int(graph.isolated.sum())}


def _oracle_summary(graph: WeightedGraph) -> dict | None:
    if graph.n > MAX_LP_NODES:
        return None
    ip = brute_force_mwis(graph)
    lp = lp_optimum(graph)
    return {"ip_value": ip.value, "ip_optima": [p.tolist() for p in ip.optima],
            "ip_unique": ip.unique, "lp_value": lp.value,
            "lp_optima": [p.tolist() for p in lp.optima[:64]],
            "lp_optima_count": len(lp.optima), "lp_unique": lp.unique,
            "integral": lp.integral, "fractional_nodes": lp.fractional_nodes.tolist()}


def _cmd_maxprod(cfg, graph):
    trace = maxprod.run(graph, cfg.max_iters, cfg.tau, cfg.window)
    final = trace.final_messages
    residual = maxprod.fixed_point_residual(graph, final)
    result = {
        "converged": trace.converged,
        "iterations": trace.iterations,
        "estimates": maxprod.as_symbols(trace.final_estimate),
        "messages": final,
        "residual": residual,
        "oscillation_period": None if trace.converged else trace.oscillation_period(),
        "structure_violations": [dataclasses.asdict(v) for v in
                                 maxprod.check_fixed_point_structure(graph, trace.final_estimate)]
        if trace.converged else None,
    }
    iters = [{"t": t, "estimates": maxprod.as_symbols(e),
              "max_change": trace.changes[t - 1] if t else None}
             for t, e in enumerate(trace.estimates)]
    params = {"tau": trace.tau, "max_iters": cfg.max_iters, "window": cfg.window, "init": "zero"}
    oracle = None
    if graph.n <= 12:
        depth = min(ORACLE_DEPTH, trace.iterations) + 1
        tree = comptree.oracle_estimates(graph, depth)
        match = [bool(np.array_equal(tree[t], trace.estimates[t])) for t in range(depth)]
        oracle = {"comptree_depths_checked": depth, "comptree_match": all(match)}
        summary = _oracle_summary(graph)
        oracle.update(summary)
        if trace.converged and summary["lp_unique"] and summary["integral"]:
            lp_x = np.array(summary["lp_optima"][0])
            est = trace.final_estimate
            oracle["lp_agreement"] = bool(np.all(
                ((est == maxprod.Estimate.ONE) & (lp_x == 1))
                | ((est == maxprod.Estimate.ZERO) & (lp_x == 0))))
    return params, result, {"iterations": iters}, oracle


def _descent_params(cfg) -> BarrierParams:
    return BarrierParams(cfg.eps, cfg.delta, cfg.max_sweeps, cfg.residuals)


def _cmd_descent(cfg, graph):
    params = _descent_params(cfg)
    res = run_descent(graph, params)
    report = dual_feasible(graph, res.lam)
    result = {
        "lambda": res.lam, "edges": graph.edges, "sweeps": res.sweeps,
        "converged": res.converged, "dual_value": res.dual_value,
        "barrier_objective": res.objective[-1], "feasible": report.feasible,
        "slacks": report.slacks, "monotone": res.monotone,
        "bound_failures": res.bound_failures, "zero_clamps": res.zero_clamps,
        "notes": res.notes,
    }
    series = {"objective": _series(res.objective), "max_change": _series(res.max_change)}
    oracle = None
    if graph.n <= MAX_LP_NODES:
        lp = lp_optimum(graph)
        oracle = {"lp_value": lp.value, "dual_gap": res.dual_value - lp.value,
                  "gap_over_eps_n": (res.dual_value - lp.value) / (params.eps * graph.n)}
    return dataclasses.asdict(params), result, series, oracle


def _cmd_algo(cfg, graph):
    delta1 = cfg.delta1 if cfg.delta1 is not None else default_delta1(cfg.eps)
    res = algo_mwis(graph, cfg.eps, cfg.delta, delta1, cfg.max_sweeps, cfg.residuals)
    params = {**dataclasses.asdict(_descent_params(cfg)), "delta1": delta1}
    result = {
        "x": res.x, "weight": subset_weight(graph, res.x),
        "independent": is_independent(graph, res.x),
        "colors": [c.value for c in res.recovery.colors],
        "color_counts": res.recovery.counts(), "rounds": res.recovery.rounds,
        "lambda": res.descent.lam, "sweeps": res.descent.sweeps,
        "descent_converged": res.descent.converged, "dual_value": res.descent.dual_value,
        "warnings": res.warnings,
    }
    series = {"objective": _series(res.descent.objective),
              "max_change": _series(res.descent.max_change),
              "est_changes": res.recovery.changes}
    oracle = None
    if graph.n <= MAX_LP_NODES:
        summary = _oracle_summary(graph)
        ip_opt = [np.array(p) for p in summary["ip_optima"]]
        oracle = {
            "ip_value": summary["ip_value"], "ip_unique": summary["ip_unique"],
            "lp_value": summary["lp_value"], "integral": summary["integral"],
            "fractional_lp": not summary["integral"],
            "oracle_match": any(np.array_equal(res.x, p) for p in ip_opt),
            "certificate": check_complementary_slackness(graph, res.x, res.descent.lam,
                                                         tol=10 * delta1).holds,
        }
    return params, result, series, oracle


def _cmd_oracle(cfg, graph):
    _need(graph, MAX_LP_NODES, "LP enumeration")
    summary = _oracle_summary(graph)
    return {}, summary, {}, None


def _cmd_comptree(cfg, graph):
    if not 0 <= cfg.root < graph.n:
        raise ValueError(f"root {cfg.root} is not a node of the instance")
    tree = comptree.build(graph, cfg.root, cfg.depth)
    best_with, best_without = comptree.root_values(tree)
    member = comptree.root_membership(tree)
    gamma = maxprod.zero_messages(graph)
    for _ in range(cfg.depth - 1):
        gamma = maxprod.sweep(graph, gamma)
    tau = cfg.tau if cfg.tau is not None else maxprod.default_tau(graph)
    est = maxprod.estimate(graph, gamma, tau)
    tree_est = comptree.oracle_estimate(graph, cfg.root, cfg.depth)
    result = {
        "root": cfg.root, "depth": cfg.depth, "size": tree.size,
        "expected_size": comptree.expected_size(graph, cfg.root, cfg.depth),
        "best_with_root": best_with, "best_without_root": best_without,
        "membership": member.value, "oracle_estimate": str(tree_est),
        "maxprod_estimate": str(maxprod.Estimate(int(est[cfg.root]))),
        "agree": int(est[cfg.root]) == int(tree_est),
    }
    params = {"root": cfg.root, "depth": cfg.depth,
              "sweeps_compared": cfg.depth - 1}
    return params, result, {}, None


def _solver(cfg):
    if cfg.solver == "exact":
        return exact_solver
    if cfg.solver == "algo":
        return lambda g: algo_mwis(g, cfg.eps, cfg.delta, cfg.delta1, cfg.max_sweeps).x
    def mp(g):
        est = maxprod.run(g, cfg.max_iters, cfg.tau, cfg.window).final_estimate
        return (est == maxprod.Estimate.ONE).astype(np.int64)
    return mp


def _cmd_reduce_map(cfg, text):
    problem = parse_factor_model(json.loads(text))
    red = build_reduction(problem)
    if cfg.solver == "exact":
        _need(red.graph, MAX_BNB_NODES, "exact MWIS on the auxiliary graph")
    params = {"solver": cfg.solver, "offset": red.offset}
    result = {"nodes": red.graph.n, "edges": red.graph.m,
              "labels": [[a, list(y)] for a, y in red.labels], "offset": red.offset}
    try:
        res = map_via_mwis(problem, _solver(cfg))
        result.update({"liftable": True, "assignment": list(res.assignment),
                       "score": res.score, "mwis_weight": res.mwis_weight,
                       "weight_identity": res.mwis_weight - (res.score + red.offset * len(problem.factors))})
    except NotLiftable as exc:
        result.update({"liftable": False, "reason": str(exc)})
    oracle = None
    if int(np.prod(problem.domains)) <= 10**5:
        y, score = brute_force_map(problem)
        oracle = {"map_assignment": list(y), "map_score": score,
                  "score_match": result.get("liftable", False)
                  and abs(result["score"] - score) <= 1e-9 * max(1.0, abs(score))}
    return params, result, {}, oracle


def _cmd_verify(cfg, graph):
    _need(graph, MAX_LP_NODES, "verification")
    checks = {}
    trace = maxprod.run(graph, cfg.max_iters, cfg.tau, cfg.window)
    depth = min(ORACLE_DEPTH, trace.iterations) + 1
    if graph.n <= 12:
        tree = comptree.oracle_estimates(graph, depth)
        checks["maxprod_matches_comptree"] = all(
            np.array_equal(tree[t], trace.estimates[t]) for t in range(depth))
    lp = lp_optimum(graph)
    ip = brute_force_mwis(graph)
    checks["lp_bounds_ip"] = lp.value >= ip.value - 1e-9
    checks["gap_iff_fractional"] = (abs(lp.value - ip.value) <= 1e-9) == lp.integral
    if trace.converged and maxprod.fixed_point_residual(graph, trace.final_messages) < 1e-9:
        checks["fixed_point_structure"] = not maxprod.check_fixed_point_structure(
            graph, trace.final_estimate)
    delta1 = cfg.delta1 if cfg.delta1 is not None else default_delta1(cfg.eps)
    algo = algo_mwis(graph, cfg.eps, cfg.delta, delta1, cfg.max_sweeps, cfg.residuals)
    checks["descent_monotone"] = algo.descent.monotone
    checks["descent_bounds"] = algo.descent.bound_failures == 0
    checks["est_rounds_within_n"] = algo.recovery.rounds <= max(graph.n, 1)
    if bipartition(graph).is_bipartite and ip.unique:
        checks["algo_matches_unique_mwis"] = bool(np.array_equal(algo.x, ip.optima[0]))
    params = {"tau": trace.tau, "eps": cfg.eps, "delta": cfg.delta, "delta1": delta1}
    result = {"checks": checks, "all_passed": all(checks.values())}
    return params, result, {}, None


def _cmd_generate(cfg):
    graph = generate_instance(cfg.kind, cfg.n, cfg.p, cfg.seed, cfg.weight)
    params = {"kind": cfg.kind, "n": cfg.n, "p": cfg.p, "seed": cfg.seed, "weight": cfg.weight}
    text = serialize_json(graph) if cfg.format == "json" else serialize_text(graph)
    return params, {"graph": text}, {}, None


def run_command(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; return ``(exit_code, report)``."""
    start = time.perf_counter()
    report = {"command": cfg.command, "instance": None, "params": {}, "result": None,
              "series": {}, "oracle": None, "error": None}
    code = 0
    try:
        if cfg.command == "generate":
            params, result, series, oracle = _cmd_generate(cfg)
        elif cfg.command == "reduce-map":
            text = Path(cfg.instance).read_text()
            report["instance"] = {"path": cfg.instance}
            params, result, series, oracle = _cmd_reduce_map(cfg, text)
        else:
            graph = _load_graph(cfg)
            report["instance"] = {"path": cfg.instance, **_instance_info(graph)}
            handler = {"maxprod": _cmd_maxprod, "descent": _cmd_descent, "algo": _cmd_algo,
                       "oracle": _cmd_oracle, "comptree": _cmd_comptree,
                       "verify": _cmd_verify}[cfg.command]
            params, result, series, oracle = handler(cfg, graph)
        report.update(params=params, result=result, series=series, oracle=oracle)
    except (SizeLimit, InstanceTooLarge, comptree.TreeTooLarge, ReductionError) as exc:
        code = 2
        report["error"] = {"kind": "size-limit", "message": str(exc)}
    except (FormatError, ValueError, OSError, InteriorLost, json.JSONDecodeError) as exc:
        code = 1
        report["error"] = {"kind": "input", "message": str(exc)}
    report["exit_code"] = code
    report["timing"] = {"wall_clock_s": time.perf_counter() - start}
    return code, _clean(report)


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mwis-mp", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("instance", nargs="?", help="graph file (or factor model for reduce-map)")
    ap.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    ap.add_argument("--format", choices=("auto", "text", "json"))
    ap.add_argument("--eps", type=float)
    ap.add_argument("--delta", type=float)
    ap.add_argument("--delta1", type=float)
    ap.add_argument("--tau", type=float)
    ap.add_argument("--max-iters", type=int)
    ap.add_argument("--max-sweeps", type=int)
    ap.add_argument("--window", type=int)
    ap.add_argument("--residuals", choices=("exact", "clamped"))
    ap.add_argument("--root", type=int)
    ap.add_argument("--depth", type=int)
    ap.add_argument("--solver", choices=("exact", "algo", "maxprod"))
    ap.add_argument("--kind", choices=KINDS)
    ap.add_argument("-n", type=int)
    ap.add_argument("-p", type=float)
    ap.add_argument("--weight", type=float)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--out")
    return ap


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    data = {}
    if args.config:
        data.update(json.loads(Path(args.config).read_text()))
    for key, value in vars(args).items():
        if key == "config" or value is None:
            continue
        data[key] = value
    return RunConfig.from_dict(data)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (ValueError, OSError) as exc:
        print(f"mwis-mp: {exc}", file=sys.stderr)
        return 1
    code, report = run_command(cfg)
    text = dump_report(report)
    if cfg.command == "generate" and code == 0 and cfg.out:
        Path(cfg.out).write_text(report["result"]["graph"])
    elif cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if report["error"]:
        print(f"mwis-mp: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

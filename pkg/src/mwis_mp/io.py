"""Graph and factor-model file formats.

Text graphs follow DIMACS habits::

    # comment
    p mwis <n> <m>
    v <id> <weight>
    e <i> <j>

JSON graphs are ``{"nodes": [{"id": .., "w": ..}], "edges": [[i, j]]}``.
Node labels in either format may be arbitrary tokens; they are remapped
to ``0..n-1`` (integer labels that already form ``0..n-1`` keep their
value, anything else is numbered in order of appearance).

Factor models are ``{"vars": [domain sizes], "factors": [{"scope": [..],
"table": [row-major reals]}]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graph import GraphError, WeightedGraph
from .map_reduction import MapProblem


class FormatError(ValueError):
    pass


def _relabel(labels: list[str]) -> dict[str, int]:
    try:
        ints = [int(s) for s in labels]
    except ValueError:
        ints = None
    if ints is not None and sorted(ints) == list(range(len(labels))):
        return {s: v for s, v in zip(labels, ints)}
    return {s: k for k, s in enumerate(labels)}


def parse_text(text: str) -> WeightedGraph:
    header = None
    weights: dict[str, float] = {}
    order: list[str] = []
    edges: list[tuple[str, str, int]] = []
    seen: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "p":
            if len(tok) != 4 or tok[1] != "mwis":
                raise FormatError(f"malformed header at line {lineno}")
            if header is not None:
                raise FormatError(f"second header at line {lineno}")
            try:
                header = (int(tok[2]), int(tok[3]))
            except ValueError:
                raise FormatError(f"malformed header at line {lineno}") from None
        elif kind == "v":
            if len(tok) != 3:
                raise FormatError(f"malformed node line at line {lineno}")
            try:
                w = float(tok[2])
            except ValueError:
                raise FormatError(f"bad weight at line {lineno}") from None
            if tok[1] in weights:
                raise FormatError(f"duplicate node {tok[1]} at line {lineno}")
            if not w > 0 or w != w or w == float("inf"):
                raise FormatError(f"non-positive or non-finite weight at line {lineno}")
            weights[tok[1]] = w
            order.append(tok[1])
        elif kind == "e":
            if len(tok) != 3:
                raise FormatError(f"malformed edge line at line {lineno}")
            a, b = tok[1], tok[2]
            if a == b:
                raise FormatError(f"self-loop at line {lineno}")
            key = frozenset((a, b))
            if key in seen:
                raise FormatError(f"duplicate edge at line {lineno} (first at line {seen[key]})")
            seen[key] = lineno
            edges.append((a, b, lineno))
        else:
            raise FormatError(f"unknown line type {kind!r} at line {lineno}")
    if header is None:
        raise FormatError("missing 'p mwis <n> <m>' header")
    for a, b, lineno in edges:
        for v in (a, b):
            if v not in weights:
                raise FormatError(f"edge at line {lineno} references undeclared node {v}")
    n, m = header
    if n != len(order):
        raise FormatError(f"header declares {n} nodes, found {len(order)}")
    if m != len(edges):
        raise FormatError(f"header declares {m} edges, found {len(edges)}")
    ids = _relabel(order)
    w = [0.0] * n
    for s in order:
        w[ids[s]] = weights[s]
    try:
        return WeightedGraph.from_edges(w, [(ids[a], ids[b]) for a, b, _ in edges])
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def parse_json_graph(obj) -> WeightedGraph:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or set(obj) != {"nodes", "edges"}:
        raise FormatError("graph object needs exactly the keys 'nodes' and 'edges'")
    labels = []
    weights = {}
    for k, node in enumerate(obj["nodes"]):
        if not isinstance(node, dict) or set(node) != {"id", "w"}:
            raise FormatError(f"node entry {k} needs keys 'id' and 'w'")
        key = str(node["id"])
        if key in weights:
            raise FormatError(f"duplicate node {key}")
        labels.append(key)
        weights[key] = float(node["w"])
    ids = _relabel(labels)
    w = [0.0] * len(labels)
    for s in labels:
        w[ids[s]] = weights[s]
    edges = []
    seen = set()
    for k, e in enumerate(obj["edges"]):
        if len(e) != 2:
            raise FormatError(f"edge entry {k} is not a pair")
        a, b = str(e[0]), str(e[1])
        if a not in ids or b not in ids:
            raise FormatError(f"edge entry {k} references an undeclared node")
        if a == b:
            raise FormatError(f"self-loop at edge entry {k}")
        if frozenset((a, b)) in seen:
            raise FormatError(f"duplicate edge at edge entry {k}")
        seen.add(frozenset((a, b)))
        edges.append((ids[a], ids[b]))
    try:
        return WeightedGraph.from_edges(w, edges)
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def parse_graph(text: str, fmt: str = "auto") -> WeightedGraph:
    """Parse either format; ``auto`` picks JSON when the text opens with ``{``."""
    if fmt == "auto":
        fmt = "json" if text.lstrip().startswith("{") else "text"
    if fmt == "json":
        try:
            return parse_json_graph(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if fmt == "text":
        return parse_text(text)
    raise FormatError(f"unknown graph format {fmt!r}")


def serialize_text(graph: WeightedGraph) -> str:
    lines = [f"p mwis {graph.n} {graph.m}"]
    lines += [f"v {i} {w!r}" for i, w in enumerate(graph.weights.tolist())]
    lines += [f"e {i} {j}" for i, j in graph.edges.tolist()]
    return "\n".join(lines) + "\n"


def to_json_obj(graph: WeightedGraph) -> dict:
    return {
        "nodes": [{"id": i, "w": w} for i, w in enumerate(graph.weights.tolist())],
        "edges": graph.edges.tolist(),
    }


def serialize_json(graph: WeightedGraph) -> str:
    return json.dumps(to_json_obj(graph), indent=1) + "\n"


def read_graph(path, fmt: str = "auto") -> WeightedGraph:
    return parse_graph(Path(path).read_text(), fmt)


def parse_factor_model(obj) -> MapProblem:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or set(obj) != {"vars", "factors"}:
        raise FormatError("factor model needs exactly the keys 'vars' and 'factors'")
    factors = []
    for k, f in enumerate(obj["factors"]):
        if not isinstance(f, dict) or set(f) != {"scope", "table"}:
            raise FormatError(f"factor {k} needs keys 'scope' and 'table'")
        factors.append((f["scope"], f["table"]))
    try:
        return MapProblem.from_tables(obj["vars"], factors)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def factor_model_to_json(problem: MapProblem) -> dict:
    return {
        "vars": list(problem.domains),
        "factors": [{"scope": list(f.scope), "table": f.table.reshape(-1).tolist()}
                    for f in problem.factors],
    }

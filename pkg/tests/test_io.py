import json

import pytest
from hypothesis import given, settings

from mwis_mp.io import (FormatError, factor_model_to_json, parse_factor_model, parse_graph,
                        serialize_json, serialize_text, to_json_obj)
from mwis_mp.map_reduction import MapProblem

from conftest import graphs

EDGE_TEXT = "p mwis 2 1\nv 0 1.0\nv 1 2.0\ne 0 1\n"


def test_text_and_json_agree(edge):
    assert parse_graph(EDGE_TEXT) == edge
    obj = {"nodes": [{"id": 0, "w": 1.0}, {"id": 1, "w": 2.0}], "edges": [[0, 1]]}
    assert parse_graph(json.dumps(obj)) == edge


def test_comments_and_labels():
    text = "# header\np mwis 2 1\nv a 1.5  # left\nv b 2\ne b a\n"
    g = parse_graph(text)
    assert g.weights.tolist() == [1.5, 2.0] and g.edges.tolist() == [[0, 1]]


@pytest.mark.parametrize("text, message", [
    ("p mwis 1 1\nv 0 1\ne 0 0\n", "self-loop at line 3"),
    ("p mwis 2 2\nv 0 1\nv 1 1\ne 0 1\ne 1 0\n", "duplicate edge at line 5"),
    ("p mwis 1 0\nv 0 -1\n", "non-positive"),
    ("p mwis 1 0\nv 0 abc\n", "bad weight at line 2"),
    ("p mwis 2 0\nv 0 1\n", "header declares 2 nodes"),
    ("v 0 1\n", "missing"),
    ("p mwis 1 1\nv 0 1\ne 0 7\n", "undeclared node 7"),
    ("p mwis 1 0\nx 0\n", "unknown line type"),
])
def test_text_errors(text, message):
    with pytest.raises(FormatError, match=message):
        parse_graph(text)


def test_json_errors():
    with pytest.raises(FormatError):
        parse_graph('{"nodes": [], "edges": [], "extra": 1}')
    with pytest.raises(FormatError, match="self-loop"):
        parse_graph('{"nodes": [{"id": 0, "w": 1}], "edges": [[0, 0]]}')
    with pytest.raises(FormatError, match="invalid JSON"):
        parse_graph('{"nodes": [')


@given(graphs(max_n=9))
@settings(max_examples=80, deadline=None)
def test_round_trips(g):
    assert parse_graph(serialize_text(g)) == g
    assert parse_graph(serialize_json(g)) == g
    assert parse_graph(json.dumps(to_json_obj(g)), fmt="json") == g


def test_factor_model_round_trip():
    obj = {"vars": [2, 3], "factors": [{"scope": [0, 1], "table": list(range(6))},
                                       {"scope": [1], "table": [0.5, 0, -1]}]}
    p = parse_factor_model(obj)
    assert isinstance(p, MapProblem) and p.factors[0].table[1, 2] == 5
    assert factor_model_to_json(p) == {"vars": [2, 3], "factors": [
        {"scope": [0, 1], "table": [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]},
        {"scope": [1], "table": [0.5, 0.0, -1.0]}]}
    with pytest.raises(FormatError):
        parse_factor_model({"vars": [2], "factors": [{"scope": [0], "table": [1]}]})

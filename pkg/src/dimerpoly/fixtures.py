"""Shipped fixtures: named links, small graphs, plabic graphs and quivers."""
from __future__ import annotations

import json
from importlib import resources

from .graph_core import PlaneBipartiteGraph, from_json
from .quiver import Quiver

# published data attached to the graph fixtures
GRAPH_META = {
    "big_ex": {"sequence": [3, 2, 4, 5, 1], "g": [0, 0, -1, 0, 0], "matchings": 12},
    "reduction_seq": {"sequence": [2, 7, 3, 5, 1, 4, 6, 2, 5]},
    "quiver_ex": {"double_arrow": [1, 3]},
    "bigon": {"D": "1 + y1"},
    "cycle4": {"D": "1 + y1"},
}

LINKS = ("trefoil", "figure_eight", "hopf", "whitehead")


def _data(*parts):
    return resources.files("dimerpoly").joinpath("data", *parts)


def link_pd(name: str) -> str:
    return _data("links", f"{name}.pd").read_text().strip()


def load_link(name: str):
    from .link import parse_pd
    return parse_pd(link_pd(name))


def golden(name: str) -> dict:
    return json.loads(_data("links", f"{name}.json").read_text())


def graph_names():
    return sorted(p.name[:-5] for p in _data("graphs").iterdir() if p.name.endswith(".json"))


def load_fixture_graph(name: str) -> PlaneBipartiteGraph:
    return from_json(json.loads(_data("graphs", f"{name}.json").read_text()))


def fixture_graphs():
    """(name, graph, meta) for every shipped graph."""
    return [(n, load_fixture_graph(n), GRAPH_META.get(n, {})) for n in graph_names()]


def plabic_names():
    return sorted(p.name[:-5] for p in _data("plabic").iterdir() if p.name.endswith(".json"))


def load_fixture_plabic(name: str):
    from .plabic import plabic_from_json
    return plabic_from_json(_data("plabic", f"{name}.json").read_text())


def load_fixture_quiver(name: str) -> Quiver:
    return Quiver.from_json(_data("quivers", f"{name}.json").read_text())


def schema(command: str) -> dict:
    """JSON schema for the stdout of a CLI command (or "error")."""
    return json.loads(_data("schemas", f"{command}.json").read_text())

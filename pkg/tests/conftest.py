"""Shared graph fixtures."""

import pytest

from dire_vertex_cover.example import WORKED_EXAMPLE_EDGELIST
from dire_vertex_cover.graph import Graph, normalize, parse_graph


def graph_from_text(text: str) -> Graph:
    graph, _ = normalize(parse_graph(text))
    return graph


@pytest.fixture
def make_graph():
    """Build a normalized graph from edge-list text."""
    return graph_from_text


@pytest.fixture
def worked_example() -> Graph:
    """Nine-vertex graph whose minimum cover has size 4, e.g. {1, 2, 3, 6}."""
    return graph_from_text(WORKED_EXAMPLE_EDGELIST)


@pytest.fixture
def single_edge() -> Graph:
    return graph_from_text("0 1\n")


@pytest.fixture
def p4() -> Graph:
    return graph_from_text("0 1\n1 2\n2 3\n")


@pytest.fixture
def k3() -> Graph:
    return graph_from_text("0 1\n0 2\n1 2\n")


@pytest.fixture
def c5() -> Graph:
    return graph_from_text("0 1\n1 2\n2 3\n3 4\n4 0\n")

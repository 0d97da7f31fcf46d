from __future__ import annotations

import functools

import networkx as nx
import numpy as np
import pytest

from pauligraph.graphs import Graph, from_edges

ACCEPTANCE_LINES: list[str] = []


def to_graph(nxg: nx.Graph) -> Graph:
    nodes = sorted(nxg.nodes())
    pos = {v: k for k, v in enumerate(nodes)}
    return from_edges(len(nodes), [(pos[a], pos[b]) for a, b in nxg.edges()])


def to_nx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


@functools.lru_cache(maxsize=None)
def connected_atlas(max_vertices: int = 7) -> tuple[Graph, ...]:
    """Every connected graph on 1..max_vertices vertices, up to isomorphism."""
    return tuple(to_graph(h) for h in nx.graph_atlas_g()
                 if 0 < h.number_of_nodes() <= max_vertices and nx.is_connected(h))


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return from_edges(n, edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def criterion(request):
    """Record one acceptance line; printed in the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
        print(ACCEPTANCE_LINES[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

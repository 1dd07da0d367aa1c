import itertools
import random

import networkx as nx
import pytest

from trima.colorings import ColoredGraph
from trima.core import ExplicitGraph


def random_host(rng: random.Random, n: int, p: float) -> ColoredGraph:
    """Random 2-colored G(n, p) with labels H0..H{n-1}."""
    verts = [f"H{i}" for i in range(n)]
    edges = [(verts[i], verts[j]) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
    g = ExplicitGraph.from_edges(verts, edges)
    return ColoredGraph(g, [rng.randrange(2) for _ in range(g.n_edges)], {"kind": "random-host"})


def color_class(cg: ColoredGraph, c: int) -> nx.Graph:
    g = cg.graph
    h = nx.Graph()
    h.add_nodes_from(range(g.n_vertices))
    h.add_edges_from(g.edges[e] for e in range(g.n_edges) if cg.colors[e] == c)
    return h


def brute_c4_sets(cg: ColoredGraph) -> set:
    """Every monochromatic 4-cycle as (color, frozenset of edges), via networkx."""
    out = set()
    for c in (0, 1):
        for cyc in nx.simple_cycles(color_class(cg, c), length_bound=4):
            if len(cyc) == 4:
                es = frozenset(frozenset((cyc[i], cyc[(i + 1) % 4])) for i in range(4))
                out.add((c, es))
    return out


def brute_has_k23(cg: ColoredGraph) -> bool:
    for c in (0, 1):
        h = color_class(cg, c)
        for a, b in itertools.combinations(h.nodes, 2):
            if len(set(h[a]) & set(h[b])) >= 3:
                return True
    return False


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance lines, printed again at the end of the run so they survive capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

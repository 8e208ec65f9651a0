"""Shared fixtures and the acceptance summary printed after the run."""
import numpy as np
import pytest

from refgraph.graph import DirectedGraph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_graph(n: int, p: float, seed: int, loops: bool = False) -> DirectedGraph:
    rng = np.random.default_rng(seed)
    adj = rng.random((n, n)) < p
    if not loops:
        np.fill_diagonal(adj, False)
    src, dst = np.nonzero(adj)
    return DirectedGraph.from_arrays(n, src, dst)


@pytest.fixture
def small_graph() -> DirectedGraph:
    return random_graph(60, 0.1, seed=3, loops=True)

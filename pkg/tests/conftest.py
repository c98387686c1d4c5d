import numpy as np
import pytest
from hypothesis import strategies as st

from maximin_access.graph import Graph


@st.composite
def small_graphs(draw, min_n=1, max_n=8, max_edges=None, directed=None):
    n = draw(st.integers(min_n, max_n))
    is_directed = draw(st.booleans()) if directed is None else directed
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    limit = max_edges if max_edges is not None else 2 * n
    edges = draw(st.lists(pairs, max_size=limit))
    return Graph.from_edges(n, edges, directed=is_directed)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

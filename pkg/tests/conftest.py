import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import TOY_EDGES  # noqa: E402

from msgnn.graph import SignedDiGraph  # noqa: E402


@pytest.fixture
def toy_graph():
    return SignedDiGraph.from_edge_list(TOY_EDGES)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

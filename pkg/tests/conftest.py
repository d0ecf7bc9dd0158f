import random

import pytest

from dynmis.graph import DynamicGraph, delete, insert


def graph_of(n, edges):
    return DynamicGraph.from_edges(n, edges)


def random_toggles(n, k, seed):
    """Plain-python toggle sequence, independent of the package's generators."""
    r = random.Random(seed)
    present = set()
    out = []
    for _ in range(k):
        u, v = sorted(r.sample(range(n), 2))
        if (u, v) in present:
            present.remove((u, v))
            out.append(delete(u, v))
        else:
            present.add((u, v))
            out.append(insert(u, v))
    return out


@pytest.fixture
def path3():
    return graph_of(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    return graph_of(3, [(0, 1), (1, 2), (0, 2)])


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])

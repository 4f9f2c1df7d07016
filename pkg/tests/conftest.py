import random

import pytest
from hypothesis import strategies as st

from bisection.graph import Graph


def named(n, edges, weight=1):
    return Graph.from_edges(n, edges, weight)


@pytest.fixture
def p3():
    return named(3, [(0, 1), (1, 2)])


@pytest.fixture
def p4():
    return named(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def c4():
    return named(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def k4():
    return named(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def star4():
    return named(5, [(0, i) for i in range(1, 5)])


@st.composite
def graphs(draw, max_n=8, min_n=0, lo=-10, hi=10):
    """Small simple graphs with signed integer weights."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    ws = draw(st.lists(st.integers(lo, hi), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, tuple((u, v, w) for (u, v), k, w in zip(pairs, keep, ws) if k))


def seeded(seed):
    return random.Random(seed)


ACCEPTANCE = {}


def record(number, ok, detail):
    """One pass/fail line per acceptance criterion, echoed in the terminal summary."""
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE[number] = line
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])

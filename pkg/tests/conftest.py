import random

import pytest
from hypothesis import strategies as st

from ssnc.core import build

C3_ARCS = [(0, 1), (1, 2), (2, 0)]
TT3_ARCS = [(0, 1), (1, 2), (0, 2)]
C5_ARCS = [(i, (i + 1) % 5) for i in range(5)]


@pytest.fixture
def c3():
    return build(3, C3_ARCS)


@pytest.fixture
def tt3():
    return build(3, TT3_ARCS)


@pytest.fixture
def c5():
    return build(5, C5_ARCS)


@pytest.fixture
def c5_chord():
    return build(5, C5_ARCS + [(0, 2)])


@pytest.fixture
def star():
    return build(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def rng():
    return random.Random(20240611)


@st.composite
def oriented_graphs(draw, min_n=0, max_n=7):
    n = draw(st.integers(min_n, max_n))
    states = draw(st.lists(st.sampled_from((0, 1, 2)), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    arcs = []
    it = iter(states)
    for i in range(n):
        for j in range(i + 1, n):
            s = next(it)
            if s == 1:
                arcs.append((i, j))
            elif s == 2:
                arcs.append((j, i))
    return build(n, arcs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])

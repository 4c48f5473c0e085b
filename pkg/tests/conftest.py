import itertools

import pytest
from hypothesis import strategies as st

from regclose import fintop


def topologies(n):
    """All topologies on n labelled points as frozensets of masks (slow, independent of fintop)."""
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    out = []
    for pick in itertools.product((0, 1), repeat=len(middle)):
        fam = {0, full} | {m for m, p in zip(middle, pick) if p}
        if all(a | b in fam and a & b in fam for a in fam for b in fam):
            out.append(frozenset(fam))
    return out


def space_from_masks(n, fam):
    pts = [str(i) for i in range(n)]
    return fintop.mk_space(pts, [[str(i) for i in range(n) if m >> i & 1] for m in fam])


@st.composite
def spaces(draw, max_n=4, min_n=0):
    """Random finite spaces: a random relation closed to a preorder."""
    n = draw(st.integers(min_n, max_n))
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j and draw(st.booleans()):
                up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(n):
            new = up[i]
            for j in fintop.bits(up[i]):
                new |= up[j]
            if new != up[i]:
                up[i], changed = new, True
    return fintop.make_space_from_nbhd([f"p{i}" for i in range(n)], up)


@pytest.fixture(scope="session")
def S():
    return fintop.sierpinski()


@pytest.fixture(scope="session")
def I2():
    return fintop.NAMED_SPACES["I2"]()


@pytest.fixture(scope="session")
def P1():
    return fintop.point()


@pytest.fixture(scope="session")
def D2():
    return fintop.discrete(2)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    lines = test_acceptance.summary_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

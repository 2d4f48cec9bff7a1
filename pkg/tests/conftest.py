import pytest

from qgp.modules import FPModule, ModuleMap
from qgp.quiver import a_n
from qgp.rep import Rep
from qgp.ring import TruncPoly, ZMod

SMALL_RINGS = [ZMod(4), ZMod(6), ZMod(8), ZMod(9), TruncPoly(2, 2), TruncPoly(3, 2), TruncPoly(2, 3)]


def a2_rep(ring, m0, m1, matrix):
    """Representation ``m0 -> m1`` of A2 with the arrow given by ``matrix``."""
    q = a_n(2)
    return Rep(q, ring, {"0": m0, "1": m1}, {"a0": ModuleMap(m0, m1, matrix)})


@pytest.fixture
def z4():
    return ZMod(4)


@pytest.fixture
def dual2():
    return TruncPoly(2, 2)


@pytest.fixture
def free_id(z4):
    """``R --id--> R`` over Z/4."""
    R = FPModule.free(z4, 1)
    return a2_rep(z4, R, R, [[1]])


@pytest.fixture
def zero_to_z2(z4):
    """``0 -> Z/2`` over Z/4."""
    return a2_rep(z4, FPModule.zero(z4), FPModule.cyclic(z4, 2), [])


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)

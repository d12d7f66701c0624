import pytest

from fiberlab.idealops import Ideal
from fiberlab.polyring import PresentedRing, polynomial_ring

CURVE_RELATIONS = ["x1^5 - x3^2", "x1^3*x3 - x2^3", "x2^2*x3 - x1*x4",
                   "x1^2*x3^2 - x2*x4", "x1^4*x2^2 - x3*x4", "x1*x2*x3^3 - x4^2"]

MINORS_MATRIX = [["x^3", "0", "0"], ["y^2", "0", "y*z"], ["0", "y^2", "z^2"], ["0", "z^2", "x^2"]]


@pytest.fixture(scope="session")
def curve_ring():
    return PresentedRing(["x1", "x2", "x3", "x4"], weights=[6, 11, 15, 31], relations=CURVE_RELATIONS)


@pytest.fixture(scope="session")
def curve_ideal(curve_ring):
    return Ideal(curve_ring, ["x1", "x2", "x4"])


@pytest.fixture(scope="session")
def xyz():
    return polynomial_ring(["x", "y", "z"])


@pytest.fixture(scope="session")
def xy():
    return polynomial_ring(["x", "y"])


@pytest.fixture(scope="session")
def minors_ideal(xyz):
    from fiberlab.idealops import minors

    M = [[xyz.parse(e) for e in row] for row in MINORS_MATRIX]
    return minors(M, 3, xyz)


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

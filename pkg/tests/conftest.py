import pytest

from specialmatch.coxeter import CoxeterGroup, CoxeterMatrix

# generators r, s, t of the rank-3 group with m(s,r)=2, m(r,t)=3, m(s,t)=5
R_, S_, T_ = 0, 1, 2
RST_MATRIX = CoxeterMatrix.from_edges(3, {(R_, S_): 2, (R_, T_): 3, (S_, T_): 5})

TESTED_TYPES = ["A3", "B3", "H3", "A1xA1xA1", "RST"]


def make_group(name: str) -> CoxeterGroup:
    if name == "RST":
        return CoxeterGroup(RST_MATRIX)
    return CoxeterGroup(CoxeterMatrix.named(name))


_groups = {}


def group(name: str) -> CoxeterGroup:
    """Shared group instances so word caches are reused across tests."""
    if name not in _groups:
        _groups[name] = make_group(name)
    return _groups[name]


@pytest.fixture
def A2():
    return group("A2")


@pytest.fixture
def A3():
    return group("A3")


@pytest.fixture
def B3():
    return group("B3")


@pytest.fixture
def I25():
    return group("I2(5)")


@pytest.fixture
def RST():
    return group("RST")


_acceptance_lines = []


def record(line: str):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)

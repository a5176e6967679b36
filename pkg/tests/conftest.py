from importlib import resources

import pytest

from rcc.capacity import AffiliationBipartite, capacity_from_affiliation, complete_mask
from rcc.graph import build_graph

A, B, C, D, E = range(5)
HOSPITAL_EDGES = [(A, B), (A, E), (B, E), (C, D), (C, E), (D, E)]


def data_path(name):
    return str(resources.files("rcc") / "data" / name)


@pytest.fixture
def hospital():
    return build_graph(5, HOSPITAL_EDGES)


@pytest.fixture
def hospital_aff():
    # hospital 1 -> group 0, hospital 2 -> group 1
    return AffiliationBipartite(5, 2, ((A, 0), (B, 0), (C, 1), (D, 1), (E, 0), (E, 1)))


@pytest.fixture
def hospital_mask(hospital_aff):
    return capacity_from_affiliation(hospital_aff)


@pytest.fixture
def k3():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4():
    return build_graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])


def star(k):
    return build_graph(k + 1, [(0, i) for i in range(1, k + 1)])


@pytest.fixture
def complete5():
    return complete_mask(5)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcc.capacity import (AffiliationBipartite, CapacityMask, capacity_from_affiliation,
                          complete_mask, full_graph, validate_against)
from rcc.errors import DimensionMismatch
from rcc.graph import build_graph

from conftest import A, B, C, D, E
from strategies import graph_and_mask


def test_hospital_projection(hospital_mask, hospital):
    assert hospital_mask.pair_set == {(A, B), (A, E), (B, E), (C, D), (C, E), (D, E)}
    assert full_graph(hospital_mask) == hospital


def test_single_group_gives_complete_mask():
    aff = AffiliationBipartite(4, 1, tuple((i, 0) for i in range(4)))
    assert capacity_from_affiliation(aff) == complete_mask(4)


def test_singleton_groups_give_empty_mask():
    aff = AffiliationBipartite(4, 4, tuple((i, i) for i in range(4)))
    assert len(capacity_from_affiliation(aff)) == 0


def test_shared_multiple_groups_counted_once():
    aff = AffiliationBipartite(2, 3, ((0, 0), (1, 0), (0, 2), (1, 2)))
    assert capacity_from_affiliation(aff).pair_set == {(0, 1)}


def test_affiliation_validation():
    with pytest.raises(ValueError):
        AffiliationBipartite(2, 2, ((2, 0),))
    with pytest.raises(ValueError):
        AffiliationBipartite(2, 2, ((0, 5),))
    aff = AffiliationBipartite(2, 2, ((0, 1), (0, 1), (1, 0)))
    assert aff.memberships == ((0, 1), (1, 0))


def test_full_graph_examples():
    assert full_graph(CapacityMask(5, [])) == build_graph(5, [])
    assert full_graph(complete_mask(4)) == build_graph(4, list(combinations(range(4), 2)))


def test_validate(hospital, hospital_mask, k3):
    assert validate_against(hospital, hospital_mask).ok
    report = validate_against(k3, CapacityMask(3, []))
    assert not report.ok
    assert set(report.violations) == {(0, 1), (0, 2), (1, 2)}
    assert validate_against(build_graph(5, []), hospital_mask).ok
    with pytest.raises(DimensionMismatch):
        validate_against(k3, complete_mask(4))


@pytest.mark.parametrize("n,count", [(3, 3), (0, 0), (5, 10), (1, 0)])
def test_complete_mask(n, count):
    m = complete_mask(n)
    assert m.n == n and len(m) == count


@st.composite
def affiliations(draw, max_n=6, max_m=4):
    n = draw(st.integers(0, max_n))
    m = draw(st.integers(0, max_m))
    cells = [(i, g) for i in range(n) for g in range(m)]
    keep = draw(st.lists(st.booleans(), min_size=len(cells), max_size=len(cells)))
    return AffiliationBipartite(n, m, tuple(c for c, k in zip(cells, keep) if k))


def brute_force_projection(aff):
    allowed = set()
    for g in range(aff.m_groups):
        members = [i for i, h in aff.memberships if h == g]
        for u in members:
            for v in members:
                if u < v:
                    allowed.add((u, v))
    return allowed


@given(affiliations())
def test_projection_matches_group_scan(aff):
    mask = capacity_from_affiliation(aff)
    assert mask.n == aff.n_individuals
    assert mask.pair_set == brute_force_projection(aff)


@given(affiliations(), st.data())
def test_projection_monotone(aff, data):
    if aff.n_individuals == 0 or aff.m_groups == 0:
        return
    extra = (data.draw(st.integers(0, aff.n_individuals - 1)),
             data.draw(st.integers(0, aff.m_groups - 1)))
    bigger = AffiliationBipartite(aff.n_individuals, aff.m_groups, aff.memberships + (extra,))
    assert capacity_from_affiliation(aff).pair_set <= capacity_from_affiliation(bigger).pair_set


@given(graph_and_mask())
def test_full_graph_is_consistent(gm):
    _, mask = gm
    assert validate_against(full_graph(mask), mask).ok

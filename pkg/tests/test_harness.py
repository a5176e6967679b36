import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from rcc.capacity import CapacityMask, complete_mask
from rcc.errors import DimensionMismatch, InvalidParams, SizeLimit
from rcc.graph import build_graph
from rcc.harness import (ExperimentConfig, allowed_count_variance, expected_allowed_counts,
                         oracle_census, oracle_check, run_replicate, run_sweep, summarize)
from rcc.metrics import edge_triangle_counts
from rcc.capacity import full_graph
from rcc.model import ModelParams


def test_expected_counts_examples():
    e = expected_allowed_counts(100, 1.0)
    assert (e.expected_closed, e.expected_open) == (100, 0)
    e = expected_allowed_counts(100, 0.5)
    assert (e.expected_closed, e.expected_open) == (12.5, 37.5)
    assert 3 * e.expected_closed / (3 * e.expected_closed + e.expected_open) == 0.5
    e = expected_allowed_counts(0, 0.7)
    assert (e.expected_closed, e.expected_open) == (0, 0)
    with pytest.raises(InvalidParams):
        expected_allowed_counts(10, 1.5)


@pytest.mark.parametrize("p", [0.05, 0.2, 0.5, 0.8, 1.0])
def test_expected_counts_reproduce_p(p):
    e = expected_allowed_counts(1000, p)
    assert e.expected_closed + e.expected_open <= 1000
    assert e.rcc == pytest.approx(p, abs=1e-12)


def exhaustive_moments(mask, p):
    """Exact mean/variance of closed and open counts by enumerating edge sets."""
    pairs = list(mask)
    tris = [t for t in itertools.combinations(range(mask.n), 3)
            if all(s in mask for s in itertools.combinations(t, 2))]
    mom = np.zeros(4)
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        prob = math.prod(p if b else 1 - p for b in bits)
        present = {pr for pr, b in zip(pairs, bits) if b}
        sizes = [sum(s in present for s in itertools.combinations(t, 2)) for t in tris]
        c, o = sizes.count(3), sizes.count(2)
        mom += prob * np.array([c, c * c, o, o * o])
    return len(tris), mom[0], mom[1] - mom[0] ** 2, mom[2], mom[3] - mom[2] ** 2


@pytest.mark.parametrize("mask", [
    complete_mask(4),
    complete_mask(5),
    CapacityMask(5, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (2, 4), (0, 4)]),
])
@pytest.mark.parametrize("p", [0.3, 0.5, 0.9])
def test_variance_matches_enumeration(mask, p):
    k, mc, vc, mo, vo = exhaustive_moments(mask, p)
    t = edge_triangle_counts(full_graph(mask))
    sharing = int((t * (t - 1) // 2).sum())
    e = expected_allowed_counts(k, p)
    assert e.expected_closed == pytest.approx(mc, abs=1e-12)
    assert e.expected_open == pytest.approx(mo, abs=1e-12)
    var_c, var_o = allowed_count_variance(k, sharing, p)
    assert var_c == pytest.approx(vc, abs=1e-12)
    assert var_o == pytest.approx(vo, abs=1e-12)


def test_oracle_examples(hospital, hospital_mask, k3):
    assert oracle_census(hospital, hospital_mask).as_tuple() == (2, 10, 2, 0)
    assert oracle_census(k3, complete_mask(3)).as_tuple() == (1, 3, 1, 0)
    with pytest.raises(DimensionMismatch):
        oracle_census(k3, complete_mask(4))
    with pytest.raises(SizeLimit):
        oracle_census(build_graph(13, []), complete_mask(13))


def test_oracle_check_small():
    agree, bad = oracle_check(200, max_n=8, seed=3)
    assert agree == 200 and bad == []


PARAMS = ModelParams(60, 6, q=0.2)


def test_replicate_p_one():
    r = run_replicate(PARAMS, 1.0, 0, 5)
    assert r.c_relative == 1
    assert r.c_global == r.c_prime
    assert r.n_edges == r.n_allowed_pairs
    assert r.census.closed_allowed == r.n_allowed_triangles


def test_replicate_p_zero():
    r = run_replicate(PARAMS, 0.0, 0, 5)
    assert r.c_relative is None and r.c_global is None
    assert r.n_edges == 0


def test_replicate_deterministic_and_shares_mask_across_p():
    a = run_replicate(PARAMS, 0.4, 2, 99)
    assert a == run_replicate(PARAMS, 0.4, 2, 99)
    b = run_replicate(PARAMS, 0.7, 2, 99)
    assert (a.n_allowed_pairs, a.c_prime) == (b.n_allowed_pairs, b.c_prime)
    c = run_replicate(PARAMS, 0.4, 3, 99)
    assert c != a


def test_replicate_concentration_at_moderate_size():
    # a few seeds at N=300; pilots over 1000 seeds showed sd(C_R) ~ 0.005
    for seed in range(5):
        r = run_replicate(ModelParams(300, 30, q=0.1), 0.5, 0, seed)
        assert 0.4 <= r.c_relative <= 0.6


def test_summarize_skips_undefined():
    s = summarize([Fraction(1, 2), None, Fraction(1, 4), None])
    assert s.mean == 0.375 and s.n_defined == 2 and s.n_skipped == 2
    assert s.sd == pytest.approx(math.sqrt(0.03125))
    empty = summarize([None])
    assert empty.mean is None and empty.n_skipped == 1


def test_sweep_p_one_mean_rcc_exact():
    res = run_sweep(ExperimentConfig(PARAMS, [1.0], 4, 1))
    assert res.by_p(1.0).c_relative.mean == 1.0
    assert len(res.rows) == 4


def test_sweep_rows_ordered_and_reproducible():
    cfg = ExperimentConfig(PARAMS, [0.3, 0.6], 3, 8)
    res = run_sweep(cfg)
    assert [(r.p, r.replicate_index) for r in res.rows] == [
        (0.3, 0), (0.3, 1), (0.3, 2), (0.6, 0), (0.6, 1), (0.6, 2)]
    assert run_sweep(cfg).rows == res.rows


def test_sweep_parallel_equals_sequential():
    cfg = ExperimentConfig(PARAMS, [0.3, 0.6], 4, 8)
    par = ExperimentConfig(PARAMS, [0.3, 0.6], 4, 8, workers=2)
    assert run_sweep(par).rows == run_sweep(cfg).rows


def test_sweep_counts_undefined():
    res = run_sweep(ExperimentConfig(PARAMS, [0.0], 3, 1))
    agg = res.by_p(0.0)
    assert agg.c_relative.n_skipped == 3 and agg.c_relative.mean is None


def test_config_validation():
    with pytest.raises(InvalidParams):
        ExperimentConfig(PARAMS, [0.5], 0, 1)
    with pytest.raises(InvalidParams):
        ExperimentConfig(PARAMS, [0.5, 1.1], 3, 1)


def test_rcc_of_mean_counts_approaches_p():
    res = run_sweep(ExperimentConfig(ModelParams(300, 30, q=0.1), [0.3, 0.7], 5, 12))
    for a in res.aggregates:
        pooled = 3 * a.closed_allowed.mean / (3 * a.closed_allowed.mean + a.open_allowed.mean)
        assert abs(pooled - a.p) <= 0.03
        assert abs(a.counts.z_closed) <= 4 and abs(a.counts.z_open) <= 4

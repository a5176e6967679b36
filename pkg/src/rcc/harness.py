"""Monte Carlo experiments on the group-membership model, plus a
brute-force census used to cross-check the fast kernel."""

from __future__ import annotations

import math
from fractions import Fraction
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .capacity import CapacityMask, capacity_from_affiliation, full_graph
from .errors import DimensionMismatch, InvalidParams, SizeLimit
from .graph import Graph
from .metrics import (Coefficient, TriangleCensus, edge_triangle_counts, global_clustering,
                      rcc_from_counts, triangle_census, wedge_total)
from .model import ModelParams, _check_prob, _check_seed, replicate_streams, sample_affiliation, sample_network

ORACLE_MAX_N = 12


@dataclass(frozen=True)
class ExpectedCounts:
    p: float
    n_allowed_triangles: int
    expected_closed: float
    expected_open: float

    @property
    def rcc(self) -> Optional[float]:
        den = 3 * self.expected_closed + self.expected_open
        return 3 * self.expected_closed / den if den else None


def expected_allowed_counts(n_allowed_triangles: int, p: float) -> ExpectedCounts:
    """Expected closed / open counts when each allowed edge is an
    independent Bernoulli(p) trial: ``K p**3`` and ``K 3 p**2 (1 - p)``."""
    _check_prob(p)
    if n_allowed_triangles < 0:
        raise InvalidParams("triangle count must be non-negative")
    k = n_allowed_triangles
    return ExpectedCounts(p, k, k * p**3, k * 3 * p**2 * (1 - p))


def allowed_count_variance(n_allowed_triangles: int, n_sharing_pairs: int,
                           p: float) -> tuple[float, float]:
    """Exact variances of the closed and open allowed-triangle counts.

    The per-triangle indicators are not independent: two allowed triangles
    sharing an edge are correlated, so on top of the Bernoulli terms there is
    a covariance term for each of the ``n_sharing_pairs`` unordered pairs of
    allowed triangles with a common edge.  Two triangles share at most one
    edge, and triangles sharing none are independent.
    """
    _check_prob(p)
    k, s = n_allowed_triangles, n_sharing_pairs
    q_open = 3 * p**2 * (1 - p)
    # both open: shared edge present and one other edge in each, or shared
    # edge absent and both remaining edges present in each
    both_open = 4 * p**3 * (1 - p) ** 2 + (1 - p) * p**4
    var_closed = k * p**3 * (1 - p**3) + 2 * s * (p**5 - p**6)
    var_open = k * q_open * (1 - q_open) + 2 * s * (both_open - q_open**2)
    return var_closed, var_open


@dataclass(frozen=True)
class ExperimentConfig:
    params: ModelParams
    p_values: Sequence[float]
    replicates: int
    seed: int
    workers: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidParams("replicates must be >= 1")
        for p in self.p_values:
            _check_prob(p)
        _check_seed(self.seed)
        object.__setattr__(self, "p_values", tuple(float(p) for p in self.p_values))


@dataclass(frozen=True)
class ReplicateResult:
    p: float
    replicate_index: int
    c_global: Coefficient
    c_relative: Coefficient
    c_prime: Coefficient
    n_vertices: int
    n_edges: int
    n_allowed_pairs: int
    n_allowed_triangles: int
    n_sharing_pairs: int
    census: TriangleCensus


def run_replicate(params: ModelParams, p: float, replicate_index: int, seed: int) -> ReplicateResult:
    """Sample memberships, mask and network for one replicate and measure them.

    The membership stream depends only on ``(seed, replicate_index)``, so
    every ``p`` in a sweep sees the same masks for a given replicate.
    """
    _check_prob(p)
    aff_rng, net_rng = replicate_streams(seed, replicate_index)
    mask = capacity_from_affiliation(sample_affiliation(params, aff_rng))
    g = sample_network(mask, p, net_rng)
    census = triangle_census(g, mask)
    full = full_graph(mask)
    per_edge = edge_triangle_counts(full)
    n_allowed_triangles = int(per_edge.sum()) // 3
    return ReplicateResult(
        p=p,
        replicate_index=replicate_index,
        c_global=global_clustering(g),
        c_relative=rcc_from_counts(census.closed_allowed, census.open_allowed),
        c_prime=_full_clustering(n_allowed_triangles, full),
        n_vertices=g.n,
        n_edges=g.m,
        n_allowed_pairs=len(mask),
        n_allowed_triangles=n_allowed_triangles,
        n_sharing_pairs=int((per_edge * (per_edge - 1) // 2).sum()),
        census=census,
    )


def _full_clustering(n_triangles: int, full: Graph) -> Coefficient:
    # same value as global_clustering(full), without a second matrix product
    wedges = wedge_total(full)
    return Fraction(3 * n_triangles, wedges) if wedges else None


@dataclass(frozen=True)
class Stat:
    mean: Optional[float]
    sd: Optional[float]
    n_defined: int
    n_skipped: int


def summarize(values) -> Stat:
    """Mean and sample standard deviation of the defined values."""
    vals = [float(v) for v in values if v is not None]
    skipped = sum(1 for v in values if v is None)
    if not vals:
        return Stat(None, None, 0, skipped)
    mean = math.fsum(vals) / len(vals)
    sd = math.sqrt(math.fsum((v - mean) ** 2 for v in vals) / (len(vals) - 1)) if len(vals) > 1 else 0.0
    return Stat(mean, sd, len(vals), skipped)


@dataclass(frozen=True)
class Aggregate:
    p: float
    c_global: Stat
    c_relative: Stat
    c_prime: Stat
    closed_allowed: Stat
    open_allowed: Stat
    n_allowed_triangles: Stat
    counts: CountCheck

    @property
    def p_times_c_prime(self) -> Optional[float]:
        return None if self.c_prime.mean is None else self.p * self.c_prime.mean

    @property
    def expected(self) -> ExpectedCounts:
        """Expected counts at the mean allowed-triangle count of the cell."""
        return expected_allowed_counts(self.n_allowed_triangles.mean or 0.0, self.p)


@dataclass(frozen=True)
class CountCheck:
    """Observed vs expected mean allowed counts for one sweep cell.

    Expectations and standard errors are conditional on the sampled masks:
    the expected mean is the average of ``K_r p**3`` (resp. the open
    probability) over replicates, and its variance is the sum of the exact
    per-replicate variances divided by ``T**2``.
    """

    observed_closed: float
    expected_closed: float
    se_closed: float
    observed_open: float
    expected_open: float
    se_open: float

    @staticmethod
    def _z(obs, exp, se):
        if se == 0:
            return 0.0 if obs == exp else math.copysign(math.inf, obs - exp)
        return (obs - exp) / se

    @property
    def z_closed(self) -> float:
        return self._z(self.observed_closed, self.expected_closed, self.se_closed)

    @property
    def z_open(self) -> float:
        return self._z(self.observed_open, self.expected_open, self.se_open)


def count_check(p: float, rows: Sequence[ReplicateResult]) -> CountCheck:
    t = len(rows)
    exp_c = exp_o = var_c = var_o = 0.0
    for r in rows:
        e = expected_allowed_counts(r.n_allowed_triangles, p)
        vc, vo = allowed_count_variance(r.n_allowed_triangles, r.n_sharing_pairs, p)
        exp_c += e.expected_closed
        exp_o += e.expected_open
        var_c += vc
        var_o += vo
    return CountCheck(
        observed_closed=math.fsum(r.census.closed_allowed for r in rows) / t,
        expected_closed=exp_c / t,
        se_closed=math.sqrt(max(var_c, 0.0)) / t,
        observed_open=math.fsum(r.census.open_allowed for r in rows) / t,
        expected_open=exp_o / t,
        se_open=math.sqrt(max(var_o, 0.0)) / t,
    )


def aggregate(p: float, rows: Sequence[ReplicateResult]) -> Aggregate:
    return Aggregate(
        p=p,
        c_global=summarize([r.c_global for r in rows]),
        c_relative=summarize([r.c_relative for r in rows]),
        c_prime=summarize([r.c_prime for r in rows]),
        closed_allowed=summarize([r.census.closed_allowed for r in rows]),
        open_allowed=summarize([r.census.open_allowed for r in rows]),
        n_allowed_triangles=summarize([r.n_allowed_triangles for r in rows]),
        counts=count_check(p, rows),
    )


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    rows: tuple
    aggregates: tuple = field(default=())

    def by_p(self, p: float) -> Aggregate:
        for a in self.aggregates:
            if a.p == p:
                return a
        raise KeyError(p)


def _task(args):
    return run_replicate(*args)


def run_sweep(config: ExperimentConfig) -> SweepResult:
    """Run ``replicates`` replicates for every p; rows are ordered by
    (p position, replicate index) whatever the worker count."""
    tasks = [(config.params, p, r, config.seed)
             for p in config.p_values for r in range(config.replicates)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * config.workers))))
    else:
        rows = [_task(t) for t in tasks]
    aggs = []
    for i, p in enumerate(config.p_values):
        cell = rows[i * config.replicates:(i + 1) * config.replicates]
        aggs.append(aggregate(p, cell))
    return SweepResult(config, tuple(rows), tuple(aggs))


def oracle_census(g: Graph, mask: CapacityMask, *, max_n: int = ORACLE_MAX_N) -> TriangleCensus:
    """Census by looking at every 3-vertex subset.

    A triangle is a triple whose three pairs are all edges.  Wedges are
    counted as paths of length two: a triple with three edges holds three of
    them, a triple with two edges holds one.  An allowed triple has all three
    pairs with capacity 1; it is closed when all three pairs are edges and
    open when exactly two are.
    """
    if g.n != mask.n:
        raise DimensionMismatch(f"graph has n={g.n} but mask has n={mask.n}")
    if g.n > max_n:
        raise SizeLimit(f"oracle is limited to n <= {max_n}, got n={g.n}")
    edges = {frozenset(e) for e in g}
    capacity = {frozenset(e) for e in mask}
    triangles = wedges = closed = open_ = 0
    for triple in combinations(range(g.n), 3):
        sides = [frozenset(s) for s in combinations(triple, 2)]
        present = sum(s in edges for s in sides)
        if present == 3:
            triangles += 1
            wedges += 3
        elif present == 2:
            wedges += 1
        if all(s in capacity for s in sides):
            if present == 3:
                closed += 1
            elif present == 2:
                open_ += 1
    return TriangleCensus(triangles, wedges, closed, open_)


def random_instance(rng: np.random.Generator, n: int, mask_density: float,
                    edge_density: float) -> tuple[Graph, CapacityMask]:
    """Random mask, then a random graph drawn inside it."""
    iu, iv = np.triu_indices(n, k=1)
    pairs = np.stack([iu, iv], axis=1)
    allowed = pairs[rng.random(len(pairs)) < mask_density]
    mask = CapacityMask._trusted(n, allowed)
    return sample_network(mask, edge_density, rng), mask


DENSITIES = (0.2, 0.5, 0.8)


def oracle_check(instances: int, max_n: int = 8, seed: int = 0, min_n: int = 3) -> tuple[int, list]:
    """Compare the fast census with the oracle on random instances.

    Returns the number of agreeing instances and a list of disagreements.
    """
    if max_n < min_n:
        raise InvalidParams(f"max_n must be >= {min_n}")
    rng = np.random.Generator(np.random.PCG64(_check_seed(seed)))
    agree, bad = 0, []
    for i in range(instances):
        n = int(rng.integers(min_n, max_n + 1))
        dm = DENSITIES[rng.integers(len(DENSITIES))]
        dg = DENSITIES[rng.integers(len(DENSITIES))]
        g, mask = random_instance(rng, n, dm, dg)
        fast, slow = triangle_census(g, mask), oracle_census(g, mask, max_n=max(max_n, ORACLE_MAX_N))
        if fast == slow:
            agree += 1
        else:
            bad.append((i, g, mask, fast, slow))
    return agree, bad

"""Group-membership random graphs.

Individuals join groups at random; every pair sharing at least one group is
then linked by a single Bernoulli(p) trial.

Randomness comes from numpy's PCG64 bit generator.  A replicate's streams are
derived with ``numpy.random.SeedSequence(master, spawn_key=(replicate,))``,
whose two spawned children drive the membership draw and the edge draw
respectively.  Results therefore depend only on ``(master, replicate)``, not
on execution order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .capacity import AffiliationBipartite, CapacityMask
from .errors import InvalidParams
from .graph import Graph

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class ModelParams:
    """``q`` gives independent per-(individual, group) membership; ``k``
    instead gives every individual exactly ``k`` distinct groups."""

    n_individuals: int
    m_groups: int
    q: Optional[float] = None
    k: Optional[int] = None
    edge_prob: float = 1.0

    def __post_init__(self):
        if self.n_individuals < 0 or self.m_groups < 0:
            raise InvalidParams("N and M must be non-negative")
        if (self.q is None) == (self.k is None):
            raise InvalidParams("give exactly one of q (Bernoulli mode) or k (fixed-k mode)")
        if self.q is not None and not 0.0 <= self.q <= 1.0:
            raise InvalidParams(f"q must lie in [0, 1], got {self.q}")
        if self.k is not None and not 1 <= self.k <= self.m_groups:
            raise InvalidParams(f"k must lie in [1, M={self.m_groups}], got {self.k}")
        _check_prob(self.edge_prob)


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise InvalidParams(f"p must lie in [0, 1], got {p}")


def _check_seed(seed) -> int:
    if isinstance(seed, (bool, float)) or not 0 <= int(seed) <= MAX_SEED:
        raise InvalidParams(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def replicate_streams(master: int, replicate: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent (membership, edge) generators for one replicate."""
    ss = np.random.SeedSequence(_check_seed(master), spawn_key=(int(replicate),))
    aff_ss, net_ss = ss.spawn(2)
    return np.random.Generator(np.random.PCG64(aff_ss)), np.random.Generator(np.random.PCG64(net_ss))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(_check_seed(seed)))


def sample_affiliation(params: ModelParams, seed) -> AffiliationBipartite:
    rng = _rng(seed)
    n, m = params.n_individuals, params.m_groups
    if params.q is not None:
        member = rng.random((n, m)) < params.q
    else:
        # argsort of iid uniforms gives a uniform random permutation per row
        order = np.argsort(rng.random((n, m)), axis=1, kind="stable")[:, :params.k]
        member = np.zeros((n, m), dtype=bool)
        np.put_along_axis(member, order, True, axis=1)
    return AffiliationBipartite.from_matrix(member)


def sample_network(mask: CapacityMask, p: float, seed) -> Graph:
    """Keep each allowed pair independently with probability ``p``."""
    _check_prob(p)
    rng = _rng(seed)
    keep = rng.random(len(mask)) < p
    return Graph._trusted(mask.n, mask.allowed[keep])

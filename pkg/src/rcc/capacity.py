"""Capacity masks: which vertex pairs may carry an edge at all."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DimensionMismatch
from .graph import Graph, PairSet


class CapacityMask(PairSet):
    """Pairs with capacity 1; every other pair has capacity 0."""

    __slots__ = ()

    @property
    def allowed(self) -> np.ndarray:
        return self._pairs


@dataclass(frozen=True)
class AffiliationBipartite:
    """Individual-to-group memberships.

    ``memberships`` is stored as a sorted tuple of ``(individual, group)``
    pairs with duplicates removed.
    """

    n_individuals: int
    m_groups: int
    memberships: tuple = field(default=())

    def __post_init__(self):
        if self.n_individuals < 0 or self.m_groups < 0:
            raise ValueError("counts must be non-negative")
        seen = set()
        for i, g in self.memberships:
            if not 0 <= i < self.n_individuals:
                raise ValueError(f"individual {i} out of range for n={self.n_individuals}")
            if not 0 <= g < self.m_groups:
                raise ValueError(f"group {g} out of range for m={self.m_groups}")
            seen.add((int(i), int(g)))
        object.__setattr__(self, "memberships", tuple(sorted(seen)))

    @classmethod
    def from_matrix(cls, member: np.ndarray) -> "AffiliationBipartite":
        """Build from a boolean ``(n_individuals, m_groups)`` incidence matrix."""
        member = np.asarray(member, dtype=bool)
        rows, cols = np.nonzero(member)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "n_individuals", member.shape[0])
        object.__setattr__(obj, "m_groups", member.shape[1])
        object.__setattr__(obj, "memberships", tuple(zip(rows.tolist(), cols.tolist())))
        return obj

    def incidence(self) -> np.ndarray:
        mat = np.zeros((self.n_individuals, self.m_groups), dtype=bool)
        for i, g in self.memberships:
            mat[i, g] = True
        return mat

    def groups(self) -> list[np.ndarray]:
        """Sorted member arrays, one per group."""
        out = [[] for _ in range(self.m_groups)]
        for i, g in self.memberships:
            out[g].append(i)
        return [np.array(sorted(m), dtype=np.int64) for m in out]


def capacity_from_affiliation(aff: AffiliationBipartite) -> CapacityMask:
    """Allow a pair iff the two individuals share at least one group."""
    n = aff.n_individuals
    chunks = []
    for members in aff.groups():
        if len(members) < 2:
            continue
        iu, iv = np.triu_indices(len(members), k=1)
        chunks.append(members[iu] * n + members[iv])
    if not chunks:
        return CapacityMask._trusted(n, np.empty((0, 2), dtype=np.int64))
    keys = np.unique(np.concatenate(chunks))
    return CapacityMask._trusted(n, np.stack([keys // n, keys % n], axis=1))


def complete_mask(n: int) -> CapacityMask:
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    iu, iv = np.triu_indices(n, k=1)
    return CapacityMask._trusted(n, np.stack([iu, iv], axis=1))


def full_graph(mask: CapacityMask) -> Graph:
    """The graph containing every allowed pair as an edge."""
    return Graph._trusted(mask.n, mask.allowed)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_against(g: Graph, mask: CapacityMask) -> ValidationReport:
    """Check that every edge of ``g`` sits on a capacity-1 pair."""
    if g.n != mask.n:
        raise DimensionMismatch(f"graph has n={g.n} but mask has n={mask.n}")
    outside = ~np.isin(g.keys, mask.keys, assume_unique=True)
    return ValidationReport(tuple(map(tuple, g.edges[outside].tolist())))


def restrict(g: Graph, mask: CapacityMask) -> Graph:
    """Drop the edges of ``g`` that lie outside ``mask``."""
    if g.n != mask.n:
        raise DimensionMismatch(f"graph has n={g.n} but mask has n={mask.n}")
    inside = np.isin(g.keys, mask.keys, assume_unique=True)
    if inside.all():
        return g
    return Graph._trusted(g.n, g.edges[inside])


def mask_from_pairs(n: int, pairs: Iterable) -> CapacityMask:
    return CapacityMask(n, pairs, strict=False)

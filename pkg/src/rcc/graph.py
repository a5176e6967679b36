"""Undirected simple graphs on dense 0-based vertex ids.

Edges are held as a canonical ``(m, 2)`` int64 array: each row ``(u, v)`` has
``u < v`` and rows are sorted lexicographically.  Two graphs with the same
vertex count and edge set therefore have identical arrays, which keeps
equality, hashing and reproducible output cheap.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np
from scipy import sparse

from .errors import DuplicateEdge, SelfLoop, VertexOutOfRange


def _encode(pairs: np.ndarray, n: int) -> np.ndarray:
    return pairs[:, 0] * max(n, 1) + pairs[:, 1]


def _canonical(n: int, pairs, strict: bool, stats: Counter | None) -> np.ndarray:
    if n < 0:
        raise ValueError(f"vertex count must be non-negative, got {n}")
    arr = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs, dtype=np.int64)
    if arr.size == 0:
        return np.empty((0, 2), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("edge list must be a sequence of vertex pairs")

    bad = (arr < 0) | (arr >= n)
    if bad.any():
        row = int(np.argmax(bad.any(axis=1)))
        col = 0 if bad[row, 0] else 1
        raise VertexOutOfRange(int(arr[row, col]), n)

    loops = arr[:, 0] == arr[:, 1]
    if loops.any():
        if strict:
            raise SelfLoop(int(arr[np.argmax(loops), 0]))
        if stats is not None:
            stats["self_loops"] += int(loops.sum())
        arr = arr[~loops]

    arr = np.sort(arr, axis=1)
    keys = _encode(arr, n)
    uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
    if (counts > 1).any():
        if strict:
            seen = set()
            for i, k in enumerate(keys.tolist()):
                if k in seen:
                    raise DuplicateEdge(int(arr[i, 0]), int(arr[i, 1]))
                seen.add(k)
        if stats is not None:
            stats["duplicates"] += int((counts - 1).sum())
    return arr[first]


class PairSet:
    """Immutable set of unordered vertex pairs over ``range(n)``."""

    __slots__ = ("n", "_pairs", "__dict__")

    def __init__(self, n: int, pairs: Iterable = (), *, strict: bool = True,
                 stats: Counter | None = None):
        self.n = int(n)
        arr = _canonical(self.n, pairs, strict, stats)
        arr.setflags(write=False)
        self._pairs = arr

    @classmethod
    def _trusted(cls, n: int, canonical: np.ndarray):
        # caller guarantees rows are u < v, in range, unique and sorted
        obj = cls.__new__(cls)
        obj.n = int(n)
        arr = np.ascontiguousarray(canonical, dtype=np.int64).reshape(-1, 2)
        arr.setflags(write=False)
        obj._pairs = arr
        return obj

    @property
    def pairs(self) -> np.ndarray:
        return self._pairs

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self):
        return (tuple(p) for p in self._pairs.tolist())

    def __contains__(self, pair) -> bool:
        u, v = pair
        if u > v:
            u, v = v, u
        return (u, v) in self.pair_set

    @cached_property
    def pair_set(self) -> frozenset:
        return frozenset(map(tuple, self._pairs.tolist()))

    @cached_property
    def keys(self) -> np.ndarray:
        return _encode(self._pairs, self.n)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._pairs, other._pairs)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.n, self._pairs.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, pairs={len(self)})"

    def adjacency(self, dense: bool = False):
        """Symmetric 0/1 adjacency; float64 dense array or int64 CSR matrix."""
        u, v = self._pairs[:, 0], self._pairs[:, 1]
        if dense:
            a = np.zeros((self.n, self.n))
            a[u, v] = 1.0
            a[v, u] = 1.0
            return a
        data = np.ones(2 * len(u), dtype=np.int64)
        return sparse.csr_matrix(
            (data, (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(self.n, self.n),
        )


@dataclass(frozen=True)
class Neighborhood:
    center: int
    members: frozenset

    @property
    def degree(self) -> int:
        return len(self.members)


class Graph(PairSet):
    """Undirected simple graph; ``edges`` is the canonical pair array."""

    __slots__ = ()

    @property
    def edges(self) -> np.ndarray:
        return self._pairs

    @property
    def m(self) -> int:
        return len(self._pairs)

    @cached_property
    def _csr(self):
        return self.adjacency()

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.bincount(self._pairs.ravel(), minlength=self.n).astype(np.int64)

    def _check(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n:
            raise VertexOutOfRange(v, self.n)
        return v

    def neighbor_ids(self, v: int) -> np.ndarray:
        v = self._check(v)
        csr = self._csr
        return np.sort(csr.indices[csr.indptr[v]:csr.indptr[v + 1]])

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self


def build_graph(n: int, edge_list: Iterable, *, strict: bool = True,
                stats: Counter | None = None) -> Graph:
    """Validate and build a graph.

    Strict mode rejects self-loops and duplicate edges.  Lenient mode drops
    both and, if ``stats`` is given, tallies them under ``"self_loops"`` and
    ``"duplicates"``.
    """
    return Graph(n, edge_list, strict=strict, stats=stats)


def neighbors(g: Graph, v: int) -> Neighborhood:
    return Neighborhood(int(v), frozenset(g.neighbor_ids(v).tolist()))


def wedge_count_at(g: Graph, v: int) -> int:
    """Number of length-2 paths centred at ``v``."""
    d = int(g.degrees[g._check(v)])
    return d * (d - 1) // 2

"""Triangle census and clustering coefficients.

Coefficients are exact ``Fraction`` values.  A coefficient whose denominator
is zero is *undefined* and comes back as ``None``; it is never coerced to 0
here (the CLI can do that for tabular output).

The census kernel works on adjacency matrices.  For a graph ``G`` and mask
``A``, ``W = G @ G`` holds ``|N(j) & N(k)|`` for every pair ``(j, k)``, i.e.
the number of present wedges closing on that pair.  Summing ``W`` over the
edges of ``G`` counts each triangle six times; summing it over the allowed
pairs (halved) counts every allowed triple with >= 2 present edges, closed
triangles three times and open ones once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .capacity import CapacityMask, restrict, validate_against
from .errors import DimensionMismatch, MaskViolation
from .graph import Graph

Coefficient = Optional[Fraction]

# Above this vertex count the kernel switches from dense float64 BLAS to
# sparse int64 products.  Dense sums are exact while n**3 < 2**53.
DENSE_LIMIT = 2048


@dataclass(frozen=True)
class TriangleCensus:
    triangles: int
    wedges: int
    closed_allowed: int
    open_allowed: int

    def as_tuple(self) -> tuple:
        return (self.triangles, self.wedges, self.closed_allowed, self.open_allowed)


def _ratio(num: int, den: int) -> Coefficient:
    return Fraction(num, den) if den else None


def wedge_total(g: Graph) -> int:
    d = g.degrees
    return int((d * (d - 1) // 2).sum())


def _closure_sums(g: Graph, universe, dense: bool) -> tuple[int, int]:
    """Return ``(sum of W over edges of g, sum of W over universe pairs)``.

    Both sums run over ordered pairs.  ``universe`` is a PairSet or None.
    """
    if g.m == 0:
        return 0, 0
    if dense:
        a = g.adjacency(dense=True)
        w = a @ a
        on_edges = float(np.einsum("ij,ij->", w, a))
        if universe is None:
            return round(on_edges), 0
        u = universe.adjacency(dense=True)
        return round(on_edges), round(float(np.einsum("ij,ij->", w, u)))
    a = g.adjacency()
    w = a @ a
    on_edges = int(w.multiply(a).sum())
    if universe is None:
        return on_edges, 0
    return on_edges, int(w.multiply(universe.adjacency()).sum())


def _use_dense(n: int, dense: bool | None) -> bool:
    return n <= DENSE_LIMIT if dense is None else dense


def triangle_count(g: Graph, *, dense: bool | None = None) -> int:
    on_edges, _ = _closure_sums(g, None, _use_dense(g.n, dense))
    return on_edges // 6


def edge_triangle_counts(g: Graph, *, dense: bool | None = None) -> np.ndarray:
    """Number of triangles through each edge, aligned with ``g.edges``."""
    if g.m == 0:
        return np.zeros(0, dtype=np.int64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    if _use_dense(g.n, dense):
        a = g.adjacency(dense=True)
        return np.rint((a @ a)[u, v]).astype(np.int64)
    a = g.adjacency()
    return np.asarray((a @ a)[u, v]).ravel().astype(np.int64)


def triangle_census(g: Graph, mask: CapacityMask, *, validate: bool = True,
                    dense: bool | None = None) -> TriangleCensus:
    """Count triangles, wedges and allowed closed/open triples.

    With ``validate=False`` edges outside the mask are tolerated: they still
    count towards ``triangles`` and ``wedges`` but can never be part of an
    allowed triple.
    """
    if g.n != mask.n:
        raise DimensionMismatch(f"graph has n={g.n} but mask has n={mask.n}")
    report = validate_against(g, mask)
    if validate and not report.ok:
        raise MaskViolation(report.violations)

    use_dense = _use_dense(g.n, dense)
    inside = restrict(g, mask) if not report.ok else g
    closed_x6, allowed_closures_x2 = _closure_sums(inside, mask, use_dense)
    closed = closed_x6 // 6
    open_ = allowed_closures_x2 // 2 - 3 * closed
    if inside is g:
        triangles = closed
    else:
        triangles = triangle_count(g, dense=use_dense)
    return TriangleCensus(triangles, wedge_total(g), closed, open_)


def local_clustering(g: Graph, v: int) -> Coefficient:
    nbrs = g.neighbor_ids(v).tolist()
    k = len(nbrs)
    if k < 2:
        return None
    links = sum(1 for i, a in enumerate(nbrs) for b in nbrs[i + 1:] if g.has_edge(a, b))
    return Fraction(links, k * (k - 1) // 2)


def global_clustering(g: Graph, *, dense: bool | None = None) -> Coefficient:
    """Transitivity: three times the triangle count over the wedge count."""
    return _ratio(3 * triangle_count(g, dense=dense), wedge_total(g))


def relative_clustering(g: Graph, mask: CapacityMask, *, validate: bool = True,
                        dense: bool | None = None) -> Coefficient:
    c = triangle_census(g, mask, validate=validate, dense=dense)
    return rcc_from_counts(c.closed_allowed, c.open_allowed)


def rcc_from_counts(closed_allowed: int, open_allowed: int) -> Coefficient:
    return _ratio(3 * closed_allowed, 3 * closed_allowed + open_allowed)


def relative_local_clustering(g: Graph, mask: CapacityMask, v: int) -> Coefficient:
    """Share of the allowed neighbour pairs of ``v`` that are linked in ``g``."""
    if g.n != mask.n:
        raise DimensionMismatch(f"graph has n={g.n} but mask has n={mask.n}")
    nbrs = g.neighbor_ids(v).tolist()
    allowed = present = 0
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            if (a, b) in mask:
                allowed += 1
                present += g.has_edge(a, b)
    return _ratio(present, allowed)


def local_triangle_counts(g: Graph) -> np.ndarray:
    """Triangles through each vertex."""
    if g.m == 0:
        return np.zeros(g.n, dtype=np.int64)
    a = g.adjacency()
    return np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() // 2


def average_local_clustering(g: Graph) -> Coefficient:
    """Mean local coefficient over vertices of degree >= 2."""
    d = g.degrees
    tri = local_triangle_counts(g)
    terms = [Fraction(int(t), int(k * (k - 1) // 2)) for t, k in zip(tri, d) if k >= 2]
    if not terms:
        return None
    return sum(terms, Fraction(0)) / len(terms)

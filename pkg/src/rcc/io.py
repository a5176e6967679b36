"""Text formats: edge lists, membership lists, results CSV.

Edge list (also used for explicit capacity pair lists)::

    # comment
    n 5          # optional header: vertices are "0".."4"
    A B          # one edge per line, whitespace separated labels

Membership list: ``individual group [group ...]`` per line.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from collections import Counter
from contextlib import contextmanager
from typing import Iterable, TextIO

from .capacity import AffiliationBipartite, CapacityMask
from .errors import DuplicateEdge, ParseError, SelfLoop, VertexOutOfRange, at_line
from .graph import Graph, PairSet, build_graph


class LabelTable:
    """Bijection between external string labels and dense indices."""

    def __init__(self, labels: Iterable[str] = ()):
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        for lab in labels:
            self.add(lab)

    def add(self, label: str) -> int:
        idx = self._index.get(label)
        if idx is None:
            idx = len(self._labels)
            self._labels.append(label)
            self._index[label] = idx
        return idx

    def index(self, label: str) -> int:
        return self._index[label]

    def label(self, idx: int) -> str:
        return self._labels[idx]

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self):
        return iter(self._labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, LabelTable) and self._labels == other._labels

    def __repr__(self) -> str:
        return f"LabelTable({self._labels!r})"

    @classmethod
    def identity(cls, n: int) -> "LabelTable":
        return cls(str(i) for i in range(n))


def _lines(stream: TextIO):
    lineno = 0
    it = iter(stream)
    while True:
        try:
            raw = next(it)
        except StopIteration:
            return
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8 ({exc.reason})", lineno + 1) from None
        lineno += 1
        text = raw.split("#", 1)[0].strip()
        if text:
            yield lineno, text.split()


def _read_pairs(stream: TextIO, *, loops_fatal: bool, dups_fatal: bool,
                labels: LabelTable | None = None) -> tuple[list, LabelTable]:
    external = labels is not None
    closed = False
    labels = labels if external else LabelTable()
    pairs, seen = [], set()
    for lineno, tokens in _lines(stream):
        if tokens[0] == "n" and len(tokens) == 2 and not pairs:
            if external:
                continue
            try:
                n = int(tokens[1])
            except ValueError:
                raise ParseError(f"bad vertex count {tokens[1]!r}", lineno) from None
            if n < 0:
                raise ParseError(f"negative vertex count {n}", lineno)
            labels = LabelTable.identity(n)
            closed = True
            continue
        if len(tokens) != 2:
            raise ParseError(f"expected 2 tokens, got {len(tokens)}", lineno)
        a, b = tokens
        if closed:
            for tok in tokens:
                if tok not in labels:
                    raise at_line(VertexOutOfRange(tok, len(labels)), lineno)
        if loops_fatal and a == b:
            raise at_line(SelfLoop(a), lineno)
        if dups_fatal:
            key = frozenset(tokens)
            if key in seen:
                raise at_line(DuplicateEdge(a, b), lineno)
            seen.add(key)
        pairs.append((labels.add(a), labels.add(b)))
    return pairs, labels


def parse_edge_list(stream: TextIO, *, strict: bool = True,
                    stats: Counter | None = None) -> tuple[Graph, LabelTable]:
    """Read an edge list.  Labels are numbered in order of first appearance
    unless an ``n`` header fixes them to ``"0".."n-1"``."""
    pairs, labels = _read_pairs(stream, loops_fatal=strict, dups_fatal=strict)
    return build_graph(len(labels), pairs, strict=strict, stats=stats), labels


def parse_pair_list(stream: TextIO, labels: LabelTable | None = None) -> tuple[CapacityMask, LabelTable]:
    """Read an explicit allowed-pair list; repeated pairs are harmless.

    When ``labels`` is given, tokens are resolved against that table and
    unknown ones extend it in place; any ``n`` header is then ignored.
    """
    pairs, labels = _read_pairs(stream, loops_fatal=True, dups_fatal=False, labels=labels)
    return CapacityMask(len(labels), pairs, strict=False), labels


def parse_membership(stream: TextIO, stats: Counter | None = None
                     ) -> tuple[AffiliationBipartite, LabelTable, LabelTable]:
    """Read ``individual group [group ...]`` lines.

    Repeated memberships are kept once and tallied in ``stats["duplicates"]``.
    A line with only an individual declares it with no groups.
    """
    people, groups = LabelTable(), LabelTable()
    seen: set = set()
    dups = 0
    for _, tokens in _lines(stream):
        i = people.add(tokens[0])
        for tok in tokens[1:]:
            key = (i, groups.add(tok))
            if key in seen:
                dups += 1
            seen.add(key)
    if stats is not None:
        stats["duplicates"] += dups
    aff = AffiliationBipartite(len(people), len(groups), tuple(sorted(seen)))
    return aff, people, groups


def format_pairs(pairs: PairSet, labels: LabelTable | None = None) -> str:
    """Edge-list text; the ``n`` header is written when labels are the identity."""
    out = io.StringIO()
    if labels is None or labels == LabelTable.identity(pairs.n):
        out.write(f"n {pairs.n}\n")
        name = str
    else:
        isolated = set(range(pairs.n)) - set(pairs.pairs.ravel().tolist())
        if isolated:
            raise ValueError("labelled graphs with isolated vertices cannot be written without an n header")
        name = labels.label
    for u, v in pairs:
        out.write(f"{name(u)} {name(v)}\n")
    return out.getvalue()


def format_membership(aff: AffiliationBipartite, people: LabelTable | None = None,
                      groups: LabelTable | None = None) -> str:
    pname = people.label if people else str
    gname = groups.label if groups else str
    by_person: dict[int, list] = {i: [] for i in range(aff.n_individuals)}
    for i, g in aff.memberships:
        by_person[i].append(gname(g))
    return "".join(" ".join([pname(i), *gs]) + "\n" for i, gs in by_person.items())


def fmt_decimal(x) -> str:
    return "NA" if x is None else f"{float(x):.9f}"


@contextmanager
def atomic_write(path: str):
    """Write to a temp file in the target directory, rename on success."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


CSV_COLUMNS = ("p", "replicate", "C", "C_R", "C_prime", "p_times_C_prime", "n_vertices",
               "n_edges", "n_allowed_pairs", "triangles", "wedges", "closed_allowed",
               "open_allowed")


def write_sweep_csv(result, fh: TextIO) -> None:
    """Replicate rows, then per p three aggregate rows whose ``replicate``
    column reads ``mean``, ``sd`` and ``n_defined``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in result.rows:
        c = r.census
        w.writerow([
            fmt_decimal(r.p), r.replicate_index, fmt_decimal(r.c_global), fmt_decimal(r.c_relative),
            fmt_decimal(r.c_prime),
            fmt_decimal(None if r.c_prime is None else r.p * float(r.c_prime)),
            r.n_vertices, r.n_edges, r.n_allowed_pairs,
            c.triangles, c.wedges, c.closed_allowed, c.open_allowed,
        ])
    count_fields = ("n_vertices", "n_edges", "n_allowed_pairs", "triangles", "wedges",
                    "closed_allowed", "open_allowed")
    from .harness import summarize

    for a in result.aggregates:
        cell = [r for r in result.rows if r.p == a.p]
        counts = {
            "n_vertices": summarize([r.n_vertices for r in cell]),
            "n_edges": summarize([r.n_edges for r in cell]),
            "n_allowed_pairs": summarize([r.n_allowed_pairs for r in cell]),
            "triangles": summarize([r.census.triangles for r in cell]),
            "wedges": summarize([r.census.wedges for r in cell]),
            "closed_allowed": a.closed_allowed,
            "open_allowed": a.open_allowed,
        }
        coeffs = (a.c_global, a.c_relative, a.c_prime)
        for stat in ("mean", "sd", "n_defined"):
            if stat == "n_defined":
                ptc = a.c_prime.n_defined
                row = [fmt_decimal(a.p), stat, *(s.n_defined for s in coeffs), ptc,
                       *(counts[f].n_defined for f in count_fields)]
            else:
                ptc = a.p_times_c_prime if stat == "mean" else (
                    None if a.c_prime.sd is None else a.p * a.c_prime.sd)
                row = [fmt_decimal(a.p), stat, *(fmt_decimal(getattr(s, stat)) for s in coeffs),
                       fmt_decimal(ptc), *(fmt_decimal(getattr(counts[f], stat)) for f in count_fields)]
            w.writerow(row)

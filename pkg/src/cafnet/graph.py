"""Immutable sparse undirected simple graph.

The adjacency is stored in compressed (CSR-style) form: one contiguous
``indices`` array holding the sorted neighbour list of every node, and an
``indptr`` offset array so that node ``v``'s neighbours are
``indices[indptr[v]:indptr[v+1]]``. Degrees are O(1), neighbour iteration is
O(deg). Node ids are densified to ``0..n-1`` at load time; the original
external identifiers are kept in ``labels`` for output.

Loading cleans the input: self-loops and parallel edges are collapsed, and
nodes left without any edge are dropped (counts reported in
:class:`LoadReport`). The loaded graph therefore always satisfies
``deg(v) >= 1`` and the handshake identity ``sum(deg) == 2m``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import EdgeListParseError, InputError


@dataclass
class LoadReport:
    """Cleaning statistics from graph construction."""

    self_loops_dropped: int = 0
    duplicate_edges_dropped: int = 0
    isolated_nodes_dropped: int = 0
    dropped_labels: list[str] = field(default_factory=list)


class Graph:
    """Undirected simple graph over dense node ids ``0..n-1``.

    Immutable after construction; safe for concurrent reads.
    """

    __slots__ = ("n", "m", "indptr", "indices", "labels", "report", "_label_to_id")

    def __init__(
        self,
        indptr: np.ndarray,
        indices: np.ndarray,
        labels: list[str],
        report: LoadReport | None = None,
    ):
        self.indptr = indptr
        self.indices = indices
        self.labels = labels
        self.n = len(indptr) - 1
        self.m = len(indices) // 2
        self.report = report if report is not None else LoadReport()
        self._label_to_id: dict[str, int] | None = None

    # -- basic accessors ----------------------------------------------------

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    @property
    def degrees(self) -> np.ndarray:
        """Degree of every node, as an int64 array."""
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbour ids of ``v`` (a read-only view, do not mutate)."""
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.neighbors(u)
        i = np.searchsorted(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def id_of(self, label: str) -> int:
        if self._label_to_id is None:
            self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._label_to_id[label]
        except KeyError:
            raise InputError(f"unknown node label {label!r}") from None

    def edges(self) -> Iterable[tuple[int, int]]:
        """Yield each undirected edge once as (u, v) with u < v, sorted."""
        for v in range(self.n):
            for u in self.neighbors(v):
                if u > v:
                    yield (v, int(u))

    # -- subset primitives ----------------------------------------------------

    def _check_subset(self, nodes: Sequence[int] | np.ndarray) -> np.ndarray:
        arr = np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.n):
            bad = arr[(arr < 0) | (arr >= self.n)][0]
            raise InputError(f"node id {bad} out of range 0..{self.n - 1}")
        return np.unique(arr)

    def volume(self, nodes: Sequence[int] | np.ndarray) -> int:
        """Sum of degrees over the node subset; volume(V) == 2m."""
        arr = self._check_subset(nodes)
        return int(self.degrees[arr].sum())

    def induced_edge_count(self, nodes: Sequence[int] | np.ndarray) -> int:
        """Number of edges with both endpoints inside the subset."""
        arr = self._check_subset(nodes)
        mask = np.zeros(self.n, dtype=bool)
        mask[arr] = True
        count = 0
        for v in arr:
            nbrs = self.neighbors(int(v))
            count += int(np.count_nonzero(mask[nbrs] & (nbrs > v)))
        return count

    # -- io -------------------------------------------------------------------

    def write_edge_list(self, dest: str | TextIO) -> None:
        """Write one edge per line using external labels; round-trips losslessly."""
        own = isinstance(dest, str)
        fh = open(dest, "w", encoding="utf-8", newline="\n") if own else dest
        try:
            for u, v in self.edges():
                fh.write(f"{self.labels[u]} {self.labels[v]}\n")
        finally:
            if own:
                fh.close()

    def write_mapping(self, dest: str | TextIO) -> None:
        """Write the external-to-internal id mapping as CSV."""
        own = isinstance(dest, str)
        fh = open(dest, "w", encoding="utf-8", newline="\n") if own else dest
        try:
            fh.write("external_id,internal_id\n")
            for i, lab in enumerate(self.labels):
                fh.write(f"{_csv_field(lab)},{i}\n")
        finally:
            if own:
                fh.close()


def _csv_field(value: str) -> str:
    if any(c in value for c in ',"\n\r'):
        return '"' + value.replace('"', '""') + '"'
    return value


def _build_csr(n: int, pairs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays from unique undirected pairs over dense ids."""
    if len(pairs) == 0:
        heads = np.empty(0, dtype=np.int64)
        tails = np.empty(0, dtype=np.int64)
    else:
        heads = np.concatenate([pairs[:, 0], pairs[:, 1]])
        tails = np.concatenate([pairs[:, 1], pairs[:, 0]])
    order = np.lexsort((tails, heads))
    heads, tails = heads[order], tails[order]
    counts = np.bincount(heads, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, tails.astype(np.int64)


def from_edge_pairs(pairs: np.ndarray | Sequence[tuple[int, int]], labels: Sequence[str]) -> Graph:
    """Build a cleaned Graph from provisional-id pairs.

    ``pairs`` may contain self-loops and duplicates; ids index into ``labels``.
    Cleaning: drop loops, collapse parallels, drop nodes left isolated, then
    remap the survivors to dense ids preserving the original id order.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    n_prov = len(labels)
    report = LoadReport()

    loops = pairs[:, 0] == pairs[:, 1]
    report.self_loops_dropped = int(np.count_nonzero(loops))
    pairs = pairs[~loops]

    if len(pairs):
        canon = np.sort(pairs, axis=1)
        canon = canon[np.lexsort((canon[:, 1], canon[:, 0]))]
        keep = np.ones(len(canon), dtype=bool)
        keep[1:] = np.any(canon[1:] != canon[:-1], axis=1)
        report.duplicate_edges_dropped = int(np.count_nonzero(~keep))
        canon = canon[keep]
    else:
        canon = pairs.reshape(0, 2)

    deg = np.bincount(canon.ravel(), minlength=n_prov) if len(canon) else np.zeros(n_prov, dtype=np.int64)
    alive = deg > 0
    report.isolated_nodes_dropped = int(n_prov - np.count_nonzero(alive))
    report.dropped_labels = [labels[i] for i in np.nonzero(~alive)[0]]

    if not np.any(alive):
        raise InputError("graph is empty after cleaning (no valid edges)")

    remap = np.cumsum(alive) - 1  # provisional id -> dense id, valid where alive
    canon = remap[canon]
    kept_labels = [labels[i] for i in np.nonzero(alive)[0]]
    indptr, indices = _build_csr(len(kept_labels), canon)
    return Graph(indptr, indices, kept_labels, report)


def load_edge_list(
    source: str | TextIO,
    delimiter: str | None = None,
    comment: str = "#",
) -> Graph:
    """Parse an edge-list text stream into a cleaned :class:`Graph`.

    Each non-comment, non-blank line must hold exactly two tokens (the edge
    endpoints, arbitrary strings). ``delimiter=None`` splits on any run of
    whitespace. Ids are densified in order of first appearance.

    Raises:
        EdgeListParseError: a line does not hold exactly two tokens.
        InputError: the graph is empty after cleaning.
    """
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8") if own else source
    label_ids: dict[str, int] = {}
    heads: list[int] = []
    tails: list[int] = []
    try:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith(comment):
                continue
            tokens = line.split(delimiter)
            if len(tokens) != 2:
                raise EdgeListParseError(
                    f"expected 2 tokens, found {len(tokens)}: {line!r}", lineno
                )
            ids = []
            for tok in tokens:
                i = label_ids.get(tok)
                if i is None:
                    i = len(label_ids)
                    label_ids[tok] = i
                ids.append(i)
            heads.append(ids[0])
            tails.append(ids[1])
    finally:
        if own:
            fh.close()

    if not heads:
        raise InputError("no edges found in input")
    pairs = np.column_stack([np.asarray(heads, dtype=np.int64), np.asarray(tails, dtype=np.int64)])
    return from_edge_pairs(pairs, list(label_ids))


def loads_edge_list(text: str, **kwargs) -> Graph:
    """Parse an edge list held in a string (convenience for tests/fixtures)."""
    return load_edge_list(io.StringIO(text), **kwargs)


def connected_components(g: Graph) -> np.ndarray:
    """Component id per node (ids ordered by smallest member node)."""
    comp = np.full(g.n, -1, dtype=np.int64)
    next_id = 0
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        comp[start] = next_id
        stack = [start]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if comp[u] < 0:
                    comp[u] = next_id
                    stack.append(int(u))
        next_id += 1
    return comp


def giant_component(g: Graph) -> Graph:
    """The subgraph induced by the largest connected component.

    Ties broken by smallest component id. Surviving nodes keep their external
    labels and are re-densified preserving relative order.
    """
    comp = connected_components(g)
    sizes = np.bincount(comp)
    big = int(np.argmax(sizes))
    keep = comp == big
    remap = np.cumsum(keep) - 1
    pairs = [(remap[u], remap[v]) for u, v in g.edges() if keep[u] and keep[v]]
    labels = [g.labels[i] for i in np.nonzero(keep)[0]]
    sub = from_edge_pairs(np.asarray(pairs, dtype=np.int64), labels)
    return sub

"""Partitions of the node set with cached per-community aggregates.

A :class:`Partition` assigns every node to exactly one community and keeps
three caches that every quality function and feature needs: community
volumes, internal edge counts, and sizes. Caches are maintained
incrementally under single-node moves; a from-scratch rebuild is available
for verification.

Community ids are dense ``0..ell-1`` after construction or :meth:`compact`.
Single-node moves may leave a community temporarily empty (size 0); call
:meth:`compact` before persisting.
"""

from __future__ import annotations

import csv
from typing import Sequence, TextIO

import numpy as np

from .errors import InputError
from .graph import Graph


class Partition:
    __slots__ = ("assignment", "n_communities", "comm_volume", "comm_internal_edges", "comm_size")

    def __init__(self, g: Graph, assignment: Sequence[int] | np.ndarray):
        arr = np.asarray(assignment, dtype=np.int64)
        if arr.shape != (g.n,):
            raise InputError(f"assignment length {arr.shape} does not match node count {g.n}")
        # densify community ids (sorted order of the original ids)
        _, dense = np.unique(arr, return_inverse=True)
        self.assignment = dense.astype(np.int64)
        self.n_communities = int(self.assignment.max()) + 1 if g.n else 0
        self._rebuild_caches(g)

    def _rebuild_caches(self, g: Graph) -> None:
        ell = self.n_communities
        self.comm_size = np.bincount(self.assignment, minlength=ell)
        self.comm_volume = np.zeros(ell, dtype=np.int64)
        np.add.at(self.comm_volume, self.assignment, g.degrees)
        rows = np.repeat(np.arange(g.n), g.degrees)
        same = self.assignment[rows] == self.assignment[g.indices]
        internal_directed = np.bincount(self.assignment[rows[same]], minlength=ell)
        self.comm_internal_edges = internal_directed // 2

    # -- constructors ---------------------------------------------------------

    @classmethod
    def singletons(cls, g: Graph) -> "Partition":
        return cls(g, np.arange(g.n))

    @classmethod
    def whole(cls, g: Graph) -> "Partition":
        return cls(g, np.zeros(g.n, dtype=np.int64))

    def copy(self, g: Graph) -> "Partition":
        return Partition(g, self.assignment.copy())

    # -- accessors ------------------------------------------------------------

    @property
    def ell(self) -> int:
        return self.n_communities

    def community_of(self, v: int) -> int:
        return int(self.assignment[v])

    def members(self, c: int) -> np.ndarray:
        return np.nonzero(self.assignment == c)[0]

    def is_singleton(self, v: int) -> bool:
        return bool(self.comm_size[self.assignment[v]] == 1)

    def outlier_nodes(self) -> np.ndarray:
        """Nodes in single-node communities (the outlier set O)."""
        singleton = self.comm_size[self.assignment] == 1
        return np.nonzero(singleton)[0]

    def internal_degree(self, g: Graph, v: int) -> int:
        """Number of neighbours of v inside v's own community."""
        nbrs = g.neighbors(v)
        return int(np.count_nonzero(self.assignment[nbrs] == self.assignment[v]))

    # -- mutation ---------------------------------------------------------------

    def move(self, g: Graph, v: int, target: int) -> None:
        """Move node v to community ``target`` and update the caches.

        ``target == n_communities`` creates a new (singleton) community. The
        source community may become empty; it keeps its id until
        :meth:`compact` is called.
        """
        src = int(self.assignment[v])
        if target == src:
            return
        if not 0 <= target <= self.n_communities:
            raise InputError(f"target community {target} out of range 0..{self.n_communities}")
        if target == self.n_communities:
            self.n_communities += 1
            self.comm_size = np.append(self.comm_size, 0)
            self.comm_volume = np.append(self.comm_volume, 0)
            self.comm_internal_edges = np.append(self.comm_internal_edges, 0)
        nbrs = g.neighbors(v)
        nbr_comms = self.assignment[nbrs]
        deg_src = int(np.count_nonzero(nbr_comms == src))
        deg_tgt = int(np.count_nonzero(nbr_comms == target))
        d = g.degree(v)
        self.assignment[v] = target
        self.comm_size[src] -= 1
        self.comm_size[target] += 1
        self.comm_volume[src] -= d
        self.comm_volume[target] += d
        self.comm_internal_edges[src] -= deg_src
        self.comm_internal_edges[target] += deg_tgt

    def compact(self, g: Graph) -> "Partition":
        """Return an equivalent partition with empty communities removed."""
        return Partition(g, self.assignment)

    # -- verification -------------------------------------------------------------

    def caches_consistent(self, g: Graph) -> bool:
        """Compare the incremental caches against a from-scratch recomputation."""
        fresh = Partition(g, self.assignment)
        # densification may relabel if empties exist; compare via fresh ids
        ids = np.unique(self.assignment)
        return (
            np.array_equal(fresh.comm_size, self.comm_size[ids])
            and np.array_equal(fresh.comm_volume, self.comm_volume[ids])
            and np.array_equal(fresh.comm_internal_edges, self.comm_internal_edges[ids])
        )


def save_partition_csv(p: Partition, dest: str | TextIO) -> None:
    """Write `internal_id,community` rows (header included, one row per node)."""
    own = isinstance(dest, str)
    fh = open(dest, "w", encoding="utf-8", newline="") if own else dest
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["internal_id", "community"])
        for v, c in enumerate(p.assignment):
            writer.writerow([v, int(c)])
    finally:
        if own:
            fh.close()


def load_partition_csv(g: Graph, source: str | TextIO) -> Partition:
    """Read a `internal_id,community` CSV into a Partition for graph ``g``.

    Every internal id 0..n-1 must appear exactly once. Community ids may be
    arbitrary integers; they are densified.
    """
    own = isinstance(source, str)
    fh = open(source, "r", encoding="utf-8", newline="") if own else source
    try:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["internal_id", "community"]:
            raise InputError("partition CSV must start with header 'internal_id,community'")
        assignment = np.full(g.n, -1, dtype=np.int64)
        for row in reader:
            if not row:
                continue
            if len(row) < 2:
                raise InputError(f"partition CSV row has {len(row)} fields, expected 2: {row!r}")
            try:
                v, c = int(row[0]), int(row[1])
            except ValueError:
                raise InputError(f"non-integer entry in partition CSV row {row!r}") from None
            if not 0 <= v < g.n:
                raise InputError(f"internal id {v} out of range 0..{g.n - 1}")
            if assignment[v] != -1:
                raise InputError(f"internal id {v} assigned twice in partition CSV")
            assignment[v] = c
        missing = np.nonzero(assignment == -1)[0]
        if missing.size:
            raise InputError(f"partition CSV misses {missing.size} nodes (first: {missing[0]})")
    finally:
        if own:
            fh.close()
    return Partition(g, assignment)

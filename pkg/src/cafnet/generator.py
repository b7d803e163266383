"""Seeded planted-partition graphs with outlier nodes.

The construction is configuration-style stub matching. Community sizes and
node degrees are drawn from truncated power laws; every non-outlier splits
its stubs into an internal share round((1-xi)*deg) matched uniformly inside
its community, and an external remainder matched in one global pool.
Outliers contribute all of their stubs to the global pool, so their
neighbours land in communities roughly in proportion to community volumes.
Loops and parallel edges from the matching are dropped (counted in the
metadata), as are nodes left isolated.

Node layout before cleaning: communities occupy consecutive id blocks
starting at 0, outliers are the last ``s0`` ids. Edge ordering, parity
repairs, and matchings are all driven by one seeded generator, so equal
specs produce byte-identical edge lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleError, ParameterError
from .graph import Graph, from_edge_pairs
from .partition import Partition


@dataclass
class GenSpec:
    n: int
    s0: int
    xi: float
    seed: int
    gamma: float = 2.5
    deg_min: int = 5
    deg_max: int = 500
    size_exponent: float = 1.5
    size_min: int = 50
    size_max: int = 2000

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ParameterError(f"need at least 2 nodes, got n={self.n}")
        if not 0 <= self.s0 < self.n:
            raise ParameterError(f"outlier count must satisfy 0 <= s0 < n, got s0={self.s0}")
        if not 1 <= self.deg_min <= self.deg_max < self.n:
            raise ParameterError(
                f"degree bounds must satisfy 1 <= min <= max < n, got [{self.deg_min}, {self.deg_max}], n={self.n}"
            )
        if not self.size_min <= self.size_max <= self.n - self.s0:
            raise ParameterError(
                f"community size bounds must satisfy min <= max <= n - s0, "
                f"got [{self.size_min}, {self.size_max}], n - s0 = {self.n - self.s0}"
            )
        if self.size_min < 1:
            raise ParameterError(f"community size must be >= 1, got {self.size_min}")
        if not 0.0 <= self.xi <= 1.0:
            raise ParameterError(f"mixing parameter must be in [0, 1], got xi={self.xi}")


@dataclass
class GenOutput:
    graph: Graph
    planted: np.ndarray
    """Planted community per surviving node; -1 marks outliers."""
    labels: np.ndarray
    """1 for outliers, 0 otherwise, per surviving node."""
    community_sizes: list[int]
    metadata: dict = field(default_factory=dict)

    def planted_partition(self) -> Partition:
        """The planted assignment as a Partition; each outlier is a singleton."""
        assignment = self.planted.copy()
        n_comms = int(assignment.max()) + 1 if np.any(assignment >= 0) else 0
        out = np.nonzero(assignment < 0)[0]
        assignment[out] = n_comms + np.arange(len(out))
        return Partition(self.graph, assignment)


def _truncated_power_law(rng: np.random.Generator, exponent: float, lo: int, hi: int, size: int) -> np.ndarray:
    """Integers in [lo, hi] with P(k) proportional to k^-exponent."""
    support = np.arange(lo, hi + 1, dtype=np.float64)
    cdf = np.cumsum(support ** (-exponent))
    cdf /= cdf[-1]
    return lo + np.searchsorted(cdf, rng.random(size), side="right").astype(np.int64)


def _sample_community_sizes(rng: np.random.Generator, spec: GenSpec) -> list[int]:
    """Draw sizes until they cover the non-outlier nodes; clip the last one.

    When the clipped remainder would undercut the minimum size, it is
    spread over the earlier communities instead (one node at a time, up to
    the maximum size).
    """
    target = spec.n - spec.s0
    sizes: list[int] = []
    total = 0
    while total < target:
        for sz in _truncated_power_law(rng, spec.size_exponent, spec.size_min, spec.size_max, 64):
            sizes.append(int(sz))
            total += int(sz)
            if total >= target:
                break
    excess = total - target
    sizes[-1] -= excess
    if sizes[-1] < spec.size_min:
        remainder = sizes.pop()
        headroom = sum(spec.size_max - sz for sz in sizes)
        if remainder > headroom:
            raise InfeasibleError(
                f"cannot tile {target} non-outlier nodes with community sizes in "
                f"[{spec.size_min}, {spec.size_max}]: {remainder} nodes left over"
            )
        i = 0
        while remainder > 0:
            if sizes[i] < spec.size_max:
                sizes[i] += 1
                remainder -= 1
            i = (i + 1) % len(sizes)
    return sizes


def _match_stubs(rng: np.random.Generator, stubs: np.ndarray) -> np.ndarray:
    """Uniform perfect matching of an even stub multiset into edge pairs."""
    rng.shuffle(stubs)
    return stubs.reshape(-1, 2)


def generate(spec: GenSpec) -> GenOutput:
    rng = np.random.default_rng(spec.seed)
    sizes = _sample_community_sizes(rng, spec)
    degrees = _truncated_power_law(rng, spec.gamma, spec.deg_min, spec.deg_max, spec.n)

    nc = spec.n - spec.s0
    bounds = np.concatenate(([0], np.cumsum(sizes)))
    community = np.full(spec.n, -1, dtype=np.int64)
    for c in range(len(sizes)):
        community[bounds[c]:bounds[c + 1]] = c

    internal = np.zeros(spec.n, dtype=np.int64)
    internal[:nc] = np.rint((1.0 - spec.xi) * degrees[:nc]).astype(np.int64)
    external = degrees - internal

    # stub parity repairs: an odd pool loses one random stub
    internal_decrements = 0
    decremented = np.zeros(spec.n, dtype=bool)
    for c in range(len(sizes)):
        members = np.arange(bounds[c], bounds[c + 1])
        if int(internal[members].sum()) % 2:
            candidates = members[internal[members] > 0]
            victim = int(rng.choice(candidates))
            internal[victim] -= 1
            decremented[victim] = True
            internal_decrements += 1
    external_decrements = 0
    if int(external.sum()) % 2:
        candidates = np.nonzero((external > 0) & ~decremented)[0]
        if candidates.size == 0:
            candidates = np.nonzero(external > 0)[0]
        victim = int(rng.choice(candidates))
        external[victim] -= 1
        external_decrements = 1

    pair_blocks = []
    for c in range(len(sizes)):
        members = np.arange(bounds[c], bounds[c + 1])
        stubs = np.repeat(members, internal[members])
        if stubs.size:
            pair_blocks.append(_match_stubs(rng, stubs))
    ext_stubs = np.repeat(np.arange(spec.n), external)
    if ext_stubs.size:
        pair_blocks.append(_match_stubs(rng, ext_stubs))
    if not pair_blocks:
        raise InfeasibleError("no stubs to match; degrees too small for the requested split")
    pairs = np.concatenate(pair_blocks)

    all_labels = [str(i) for i in range(spec.n)]
    g = from_edge_pairs(pairs, all_labels)

    alive = np.ones(spec.n, dtype=bool)
    for lab in g.report.dropped_labels:
        alive[int(lab)] = False
    planted = community[alive]
    labels = (np.arange(spec.n)[alive] >= nc).astype(np.int64)

    target_edges = int(len(pairs))
    metadata = {
        "nodes_requested": spec.n,
        "nodes_surviving": g.n,
        "outliers_requested": spec.s0,
        "outliers_surviving": int(labels.sum()),
        "communities": len(sizes),
        "target_edges": target_edges,
        "realized_edges": g.m,
        "self_loops_dropped": g.report.self_loops_dropped,
        "duplicate_edges_dropped": g.report.duplicate_edges_dropped,
        "isolated_nodes_dropped": g.report.isolated_nodes_dropped,
        "internal_parity_decrements": internal_decrements,
        "external_parity_decrements": external_decrements,
        "edge_loss_fraction": (target_edges - g.m) / target_edges,
    }
    return GenOutput(
        graph=g,
        planted=planted,
        labels=labels,
        community_sizes=sizes,
        metadata=metadata,
    )

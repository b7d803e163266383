"""Shared fixtures and small graph builders."""

from __future__ import annotations

import numpy as np
import pytest

from cafnet import Graph, Partition, from_edge_pairs


def build_graph(pairs) -> Graph:
    """Graph from explicit integer pairs, labels equal to the string ids."""
    n = max(max(u, v) for u, v in pairs) + 1
    return from_edge_pairs(pairs, [str(i) for i in range(n)])


def random_graph(n: int, avg_deg: float, seed: int) -> Graph:
    """Erdos-Renyi style graph; isolated nodes are dropped at load."""
    rng = np.random.default_rng(seed)
    p = min(1.0, avg_deg / (n - 1))
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    pairs = np.stack([rows[keep], cols[keep]], axis=1)
    return from_edge_pairs(pairs, [str(i) for i in range(n)])


def random_partition(g: Graph, ell: int, seed: int) -> Partition:
    rng = np.random.default_rng(seed)
    return Partition(g, rng.integers(0, ell, size=g.n))


@pytest.fixture
def triangle() -> Graph:
    return build_graph([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_triangles() -> Graph:
    """Two triangles joined by a single bridge edge: n=6, m=7."""
    return build_graph(
        [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)]
    )


@pytest.fixture
def two_triangles_split(two_triangles):
    return two_triangles, Partition(two_triangles, [0, 0, 0, 1, 1, 1])


@pytest.fixture
def two_cliques() -> Graph:
    """Two disjoint 5-cliques joined by one bridge edge."""
    pairs = []
    for base in (0, 5):
        for i in range(5):
            for j in range(i + 1, 5):
                pairs.append((base + i, base + j))
    pairs.append((4, 5))
    return build_graph(pairs)


@pytest.fixture
def path3() -> Graph:
    return build_graph([(0, 1), (1, 2)])

"""Classical (community-agnostic) node features.

Columns and normalizations:

* ``lcc``: triangles through v over deg(v)(deg(v)-1)/2; 0 when deg(v) < 2.
* ``bc``: betweenness by Brandes' algorithm, normalized by 2/((n-1)(n-2)).
  Exact over all sources by default; ``bc_sample`` switches to K random
  source pivots with the usual n/K rescaling (approximate, for large graphs).
* ``cc``: closeness (n-1)/sum_u dist(v,u); per-component variant uses the
  component size in place of n.
* ``dc``: deg(v)/(n-1).
* ``ndc``: mean of neighbours' dc.
* ``ec``: eigenvector centrality by power iteration, scaled to unit max norm.
* ``eccen``: max_u dist(v,u) (within v's component in per-component mode).
* ``core``: k-core number by degree peeling.

``cc`` and ``eccen`` are only defined on connected graphs; on disconnected
input they require ``per_component=True`` (or extracting the giant
component up front) and otherwise raise naming the offending components.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .errors import InputError, ParameterError
from .graph import Graph, connected_components
from .matrix import CLASSICAL_FEATURE_NAMES, FeatureMatrix


@dataclass
class ClassicalConfig:
    enabled: tuple[str, ...] = CLASSICAL_FEATURE_NAMES
    ec_tolerance: float = 1e-10
    ec_max_iter: int = 1000
    bc_sample: int | None = None
    seed: int | None = None
    per_component: bool = False
    threads: int = 1

    def __post_init__(self) -> None:
        if self.threads < 1:
            raise ParameterError(f"threads must be >= 1, got {self.threads}")
        unknown = [f for f in self.enabled if f not in CLASSICAL_FEATURE_NAMES]
        if unknown:
            raise ParameterError(f"unknown classical features {unknown}; know {list(CLASSICAL_FEATURE_NAMES)}")
        if not self.enabled:
            raise ParameterError("no classical features enabled")
        if not self.ec_tolerance > 0:
            raise ParameterError(f"ec_tolerance must be positive, got {self.ec_tolerance}")
        if self.ec_max_iter < 1:
            raise ParameterError(f"ec_max_iter must be >= 1, got {self.ec_max_iter}")
        if self.bc_sample is not None:
            if self.bc_sample < 1:
                raise ParameterError(f"bc_sample must be >= 1, got {self.bc_sample}")
            if self.seed is None:
                raise ParameterError("bc_sample requires a seed")


def _adjacency(g: Graph) -> sp.csr_matrix:
    data = np.ones(len(g.indices), dtype=np.float64)
    return sp.csr_matrix((data, g.indices, g.indptr), shape=(g.n, g.n))


def local_clustering(g: Graph) -> np.ndarray:
    """Triangle fraction per node via chunked sparse A*A against A."""
    adj = _adjacency(g)
    deg = g.degrees.astype(np.float64)
    tri = np.zeros(g.n)
    # chunk rows so the intermediate path-count matrix stays small; the work
    # of row v is sum of its neighbours' degrees
    row_work = np.add.reduceat(deg[g.indices], g.indptr[:-1]) if g.n else np.zeros(0)
    budget = 2e7
    start = 0
    while start < g.n:
        stop = start + 1
        acc = row_work[start]
        while stop < g.n and acc + row_work[stop] <= budget:
            acc += row_work[stop]
            stop += 1
        block = adj[start:stop]
        paths = block @ adj
        tri[start:stop] = np.asarray(paths.multiply(block).sum(axis=1)).ravel() / 2.0
        start = stop
    pairs = deg * (deg - 1.0) / 2.0
    return np.divide(tri, pairs, out=np.zeros(g.n), where=pairs > 0)


def degree_centrality(g: Graph) -> np.ndarray:
    return g.degrees / float(g.n - 1)


def neighbour_degree_centrality(g: Graph) -> np.ndarray:
    dc = degree_centrality(g)
    sums = np.add.reduceat(dc[g.indices], g.indptr[:-1])
    return sums / g.degrees


def _component_report(comp: np.ndarray) -> str:
    sizes = np.bincount(comp)
    order = np.argsort(-sizes)
    shown = ", ".join(f"component {int(c)}: {int(sizes[c])} nodes" for c in order[:4])
    more = "" if len(sizes) <= 4 else f", and {len(sizes) - 4} more"
    return f"{len(sizes)} components ({shown}{more})"


def closeness_and_eccentricity(g: Graph, per_component: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Closeness and eccentricity from chunked all-sources BFS.

    On disconnected graphs ``per_component=True`` computes both within each
    node's component; otherwise an error names the components.
    """
    comp = connected_components(g)
    if comp.max() > 0 and not per_component:
        raise InputError(
            "closeness/eccentricity are undefined on a disconnected graph: "
            f"{_component_report(comp)}; extract the giant component or use per-component mode"
        )
    adj = _adjacency(g)
    sum_d = np.zeros(g.n)
    max_d = np.zeros(g.n)
    cnt = np.zeros(g.n, dtype=np.int64)
    chunk = max(1, min(512, int(2e7 // max(g.n, 1))))
    for start in range(0, g.n, chunk):
        sources = np.arange(start, min(start + chunk, g.n))
        dist = dijkstra(adj, directed=False, unweighted=True, indices=sources)
        finite = np.isfinite(dist)
        sum_d += np.where(finite, dist, 0.0).sum(axis=0)
        max_d = np.maximum(max_d, np.where(finite, dist, -np.inf).max(axis=0))
        cnt += finite.sum(axis=0)
    # cnt counts v itself (distance 0), so reachable peers = cnt - 1 > 0
    cc = (cnt - 1) / sum_d
    return cc, max_d


def _expand(indptr, indices, frontier):
    """All (source, neighbour) pairs for the frontier rows of a CSR graph."""
    starts = indptr[frontier]
    counts = indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    base = np.repeat(starts, counts)
    step = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(counts) - counts, counts)
    return np.repeat(frontier, counts), indices[base + step]


def _brandes_block(g: Graph, sources: np.ndarray) -> np.ndarray:
    """Sum of shortest-path dependencies over a block of source nodes."""
    n = g.n
    indptr, indices = g.indptr, g.indices
    acc = np.zeros(n)
    dist = np.empty(n, dtype=np.int64)
    sigma = np.empty(n)
    delta = np.empty(n)
    for s in sources:
        dist.fill(-1)
        sigma.fill(0.0)
        delta.fill(0.0)
        dist[s] = 0
        sigma[s] = 1.0
        frontier = np.array([s], dtype=np.int64)
        levels = [frontier]
        d = 0
        while frontier.size:
            src, tgt = _expand(indptr, indices, frontier)
            fresh = tgt[dist[tgt] == -1]
            if fresh.size == 0:
                break
            new = np.unique(fresh)
            dist[new] = d + 1
            mask = dist[tgt] == d + 1
            np.add.at(sigma, tgt[mask], sigma[src[mask]])
            levels.append(new)
            frontier = new
            d += 1
        for lev in reversed(levels):
            src, tgt = _expand(indptr, indices, lev)
            if tgt.size == 0:
                continue
            mask = dist[tgt] == dist[lev[0]] + 1
            if not mask.any():
                continue
            contrib = sigma[src[mask]] / sigma[tgt[mask]] * (1.0 + delta[tgt[mask]])
            np.add.at(delta, src[mask], contrib)
        delta[s] = 0.0
        acc += delta
    return acc


def betweenness(
    g: Graph, sample: int | None = None, seed: int | None = None, threads: int = 1
) -> np.ndarray:
    """Brandes' betweenness, normalized by 2/((n-1)(n-2)).

    ``sample=K`` accumulates dependencies from K random source pivots and
    rescales by n/K instead of visiting every source. With ``threads > 1``
    source blocks run in a worker pool; block sums are reduced in a fixed
    order, so the result does not depend on scheduling.
    """
    n = g.n
    if n < 3:
        return np.zeros(n)
    if sample is not None and sample < n:
        rng = np.random.default_rng(seed)
        sources = np.sort(rng.choice(n, size=sample, replace=False))
        scale = n / sample
    else:
        sources = np.arange(n)
        scale = 1.0
    if threads > 1 and len(sources) > 1:
        blocks = np.array_split(sources, min(len(sources), 4 * threads))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _brandes_block(g, b), blocks))
        bc = np.zeros(n)
        for part in parts:
            bc += part
    else:
        bc = _brandes_block(g, sources)
    return bc * scale / ((n - 1.0) * (n - 2.0))


def eigenvector(g: Graph, tol: float = 1e-10, max_iter: int = 1000) -> np.ndarray:
    """Dominant eigenvector of the adjacency matrix, unit max norm.

    Iterates (A + I) x to sidestep the sign flip-flop on bipartite graphs;
    the shift leaves eigenvectors unchanged. The result satisfies the
    residual bound ||A x - lam_hat x||_inf <= 1e-6 with lam_hat the Rayleigh
    quotient, checked before returning.
    """
    adj = _adjacency(g)
    x = np.full(g.n, 1.0 / g.n)
    for _ in range(max_iter):
        y = adj @ x + x
        y /= y.max()
        done = np.max(np.abs(y - x)) <= tol
        x = y
        if done:
            break
    ax = adj @ x
    lam_hat = float(x @ ax) / float(x @ x)
    residual = float(np.max(np.abs(ax - lam_hat * x)))
    if residual > 1e-6:
        raise RuntimeError(
            f"eigenvector iteration left residual {residual:.2e} > 1e-6; raise ec_max_iter"
        )
    return x


def coreness(g: Graph) -> np.ndarray:
    """k-core numbers by repeated removal of minimum-degree nodes."""
    n = g.n
    deg = g.degrees.tolist()
    order = np.argsort(g.degrees, kind="stable")
    vert = order.tolist()
    pos = [0] * n
    for i, v in enumerate(vert):
        pos[v] = i
    max_deg = int(g.degrees.max()) if n else 0
    bin_count = np.bincount(g.degrees, minlength=max_deg + 1)
    bin_start = np.concatenate(([0], np.cumsum(bin_count)[:-1])).tolist()
    core = [0] * n
    indptr, indices = g.indptr, g.indices
    for i in range(n):
        v = vert[i]
        core[v] = deg[v]
        for u in indices[indptr[v]:indptr[v + 1]].tolist():
            if deg[u] > deg[v]:
                du, pu = deg[u], pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    vert[pu], vert[pw] = w, u
                    pos[u], pos[w] = pw, pu
                bin_start[du] += 1
                deg[u] -= 1
    return np.array(core, dtype=np.float64)


def compute_classical_features(g: Graph, config: ClassicalConfig | None = None) -> FeatureMatrix:
    """The enabled classical columns, in the fixed Table order."""
    cfg = config or ClassicalConfig()
    wanted = [name for name in CLASSICAL_FEATURE_NAMES if name in cfg.enabled]
    cols: dict[str, np.ndarray] = {}
    if "lcc" in wanted:
        cols["lcc"] = local_clustering(g)
    if "bc" in wanted:
        cols["bc"] = betweenness(g, sample=cfg.bc_sample, seed=cfg.seed, threads=cfg.threads)
    if "cc" in wanted or "eccen" in wanted:
        cc, eccen = closeness_and_eccentricity(g, per_component=cfg.per_component)
        cols["cc"] = cc
        cols["eccen"] = eccen
    if "dc" in wanted or "ndc" in wanted:
        cols["dc"] = degree_centrality(g)
        cols["ndc"] = neighbour_degree_centrality(g)
    if "ec" in wanted:
        cols["ec"] = eigenvector(g, tol=cfg.ec_tolerance, max_iter=cfg.ec_max_iter)
    if "core" in wanted:
        cols["core"] = coreness(g)
    values = np.stack([cols[name] for name in wanted], axis=1)
    return FeatureMatrix(names=wanted, values=values, node_labels=list(g.labels))

"""Community-aware node features over a graph and a partition.

The core object is the node/community incidence profile: for each node v
and community A_i, the count deg_{A_i}(v) of neighbours of v inside A_i,
held in CSR layout (most nodes touch few communities). All thirteen
features derive from it:

* ``CADA``: deg(v) / max_i deg_{A_i}(v), large when no community dominates
  v's neighbourhood.
* ``CADA*``: deg_{A_v}(v) / deg(v), the fraction of neighbours in v's own
  community.
* ``WMD``: z-score of v's internal degree among the members of its own
  community (population standard deviation; 0 when the deviation is 0).
* ``CPC``: 1 - sum_i (deg_{A_i}(v)/deg(v))^2.
* ``CAS``: the ``beta`` at which the edge-contribution and degree-tax
  pieces of the leave-to-singleton move gain cancel, see
  :mod:`cafnet.quality`:  2 * (deg_{A_v}(v)/deg(v) - lam * (vol(A_v) - deg(v)) / vol(V)).
* ``CD_*``: distances between the neighbour distribution over communities
  and the volume-share distribution. Depth 1 uses q1(v), v's own neighbour
  fractions; depth 2 uses q2(v), the average of q1(u) over v's neighbours
  (two-step random-walk landing probabilities). Distances: L1, L2,
  Kullback-Leibler divergence (natural log), Hellinger.

Two routes are provided on purpose. :func:`compute_community_features` is
the production path, fully vectorized over the sparse profile.
:class:`CommunityFeatures` exposes per-node methods computed from plain
neighbour scans, useful as an independent cross-check and for spot queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import Graph
from .matrix import COMMUNITY_FEATURE_NAMES, DEPTH1_FEATURE_NAMES, FeatureMatrix
from .partition import Partition


@dataclass
class CommunityProfile:
    """CSR table of neighbour counts per (node, community) with the null shares.

    Entry k lies in row ``node_of_entry[k]``, column ``comms[k]``, and holds
    ``counts[k] = deg_{A_comms[k]}(node_of_entry[k]) >= 1``. ``qhat`` is the
    community volume share vector vol(A_i)/vol(V).
    """

    n: int
    ell: int
    indptr: np.ndarray
    comms: np.ndarray
    counts: np.ndarray
    node_of_entry: np.ndarray
    own: np.ndarray
    degrees: np.ndarray
    assignment: np.ndarray
    comm_volume: np.ndarray
    comm_size: np.ndarray
    qhat: np.ndarray

    def row(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        """Communities touched by v's neighbours and the per-community counts."""
        lo, hi = self.indptr[v], self.indptr[v + 1]
        return self.comms[lo:hi], self.counts[lo:hi]

    def matrix(self) -> sp.csr_matrix:
        """The profile as a scipy CSR matrix of shape (n, ell)."""
        return sp.csr_matrix(
            (self.counts.astype(np.float64), self.comms, self.indptr), shape=(self.n, self.ell)
        )


def build_profile(g: Graph, p: Partition) -> CommunityProfile:
    """Tally deg_{A_i}(v) for all nodes and communities in one sparse pass."""
    n, ell = g.n, p.n_communities
    rows = np.repeat(np.arange(n), g.degrees)
    cols = p.assignment[g.indices]
    mat = sp.coo_matrix(
        (np.ones(len(cols), dtype=np.int64), (rows, cols)), shape=(n, ell)
    ).tocsr()
    mat.sort_indices()
    node_of_entry = np.repeat(np.arange(n), np.diff(mat.indptr))
    counts = mat.data.astype(np.int64)
    comms = mat.indices.astype(np.int64)
    row_sums = np.bincount(node_of_entry, weights=counts, minlength=n)
    if not np.array_equal(row_sums.astype(np.int64), g.degrees):
        raise RuntimeError("profile row sums do not match degrees")
    own = np.zeros(n, dtype=np.int64)
    sel = comms == p.assignment[node_of_entry]
    own[node_of_entry[sel]] = counts[sel]
    vol_v = float(2 * g.m)
    return CommunityProfile(
        n=n,
        ell=ell,
        indptr=mat.indptr.astype(np.int64),
        comms=comms,
        counts=counts,
        node_of_entry=node_of_entry,
        own=own,
        degrees=g.degrees.astype(np.int64),
        assignment=p.assignment.copy(),
        comm_volume=p.comm_volume.astype(np.int64),
        comm_size=p.comm_size.astype(np.int64),
        qhat=p.comm_volume.astype(np.float64) / vol_v,
    )


def _sparse_distances(node_of_entry, prob, w, qhat, n):
    """L1/L2/KL/Hellinger between sparse rows ``prob`` and the dense ``qhat``.

    Off-support columns contribute |0 - w| to L1, w^2 to L2^2, nothing to KL
    (p log p -> 0), and nothing to the Hellinger cross term, so full sums
    reduce to support sums plus closed-form complements.
    """
    sum_w = np.bincount(node_of_entry, weights=w, minlength=n)
    l1 = np.bincount(node_of_entry, weights=np.abs(prob - w), minlength=n) + (1.0 - sum_w)
    l1 = np.maximum(l1, 0.0)
    w2_all = float(np.dot(qhat, qhat))
    l2sq = (
        np.bincount(node_of_entry, weights=(prob - w) ** 2 - w * w, minlength=n) + w2_all
    )
    l2 = np.sqrt(np.maximum(l2sq, 0.0))
    kl = np.bincount(node_of_entry, weights=prob * np.log(prob / w), minlength=n)
    cross = np.bincount(node_of_entry, weights=np.sqrt(prob * w), minlength=n)
    hd = np.sqrt(np.maximum(1.0 - cross, 0.0))
    return l1, l2, kl, hd


def depth2_profile(g: Graph, prof: CommunityProfile):
    """Entries of Q2 = D^-1 A P1, the two-step landing probabilities.

    Returns (node_of_entry, comms, probs) for the nonzero entries. Rows sum
    to 1 up to rounding.
    """
    adj = sp.csr_matrix(
        (np.ones(len(g.indices), dtype=np.float64), g.indices, g.indptr), shape=(g.n, g.n)
    )
    prob1 = prof.counts.astype(np.float64) / prof.degrees[prof.node_of_entry]
    p1 = sp.csr_matrix((prob1, prof.comms, prof.indptr), shape=(g.n, prof.ell))
    q2 = adj @ p1
    q2.sort_indices()
    node_of_entry = np.repeat(np.arange(g.n), np.diff(q2.indptr))
    probs = q2.data / prof.degrees[node_of_entry]
    comms = q2.indices.astype(np.int64)
    row_sums = np.bincount(node_of_entry, weights=probs, minlength=g.n)
    if np.max(np.abs(row_sums - 1.0)) > 1e-8:
        raise RuntimeError("two-step distributions do not sum to 1")
    return node_of_entry, comms, probs


def _wmd_columns(prof: CommunityProfile) -> np.ndarray:
    """Vectorized z-scores in exact integer arithmetic until the final division."""
    own, size = prof.own, prof.comm_size
    ell = prof.ell
    sum_c = np.zeros(ell, dtype=np.int64)
    np.add.at(sum_c, prof.assignment, own)
    sumsq_c = np.zeros(ell, dtype=np.int64)
    np.add.at(sumsq_c, prof.assignment, own * own)
    var_term = size * sumsq_c - sum_c * sum_c
    a = prof.assignment
    num = own * size[a] - sum_c[a]
    denom = np.sqrt(var_term[a].astype(np.float64))
    return np.divide(
        num.astype(np.float64), denom, out=np.zeros(prof.n), where=var_term[a] > 0
    )


def compute_community_features(
    g: Graph, p: Partition, lam: float = 1.0, depth2: bool = True
) -> FeatureMatrix:
    """All community-aware features for every node, vectorized.

    With ``depth2=False`` only the nine depth-1 columns are produced; the
    work is then a fixed number of passes over the edge set.
    """
    prof = build_profile(g, p)
    deg = prof.degrees.astype(np.float64)
    vol_v = float(2 * g.m)

    row_max = np.maximum.reduceat(prof.counts, prof.indptr[:-1]).astype(np.float64)
    cada = deg / row_max
    cada_star = prof.own / deg
    wmd = _wmd_columns(prof)
    prob1 = prof.counts.astype(np.float64) / deg[prof.node_of_entry]
    cpc = 1.0 - np.bincount(prof.node_of_entry, weights=prob1 * prob1, minlength=prof.n)
    vol_own = prof.comm_volume[prof.assignment].astype(np.float64)
    cas = 2.0 * (prof.own / deg - lam * (vol_own - deg) / vol_v)
    w1 = prof.qhat[prof.comms]
    l11, l21, kl1, hd1 = _sparse_distances(prof.node_of_entry, prob1, w1, prof.qhat, prof.n)
    cols = [cada, cada_star, wmd, cpc, cas, l11, l21, kl1, hd1]
    names = DEPTH1_FEATURE_NAMES
    if depth2:
        node2, comm2, prob2 = depth2_profile(g, prof)
        w2 = prof.qhat[comm2]
        l12, l22, kl2, hd2 = _sparse_distances(node2, prob2, w2, prof.qhat, prof.n)
        cols += [l12, l22, kl2, hd2]
        names = COMMUNITY_FEATURE_NAMES
    return FeatureMatrix(
        names=list(names), values=np.stack(cols, axis=1), node_labels=list(g.labels)
    )


class CommunityFeatures:
    """Per-node feature queries from plain neighbour scans.

    Slower than :func:`compute_community_features` but independent of the
    sparse profile machinery; the two must agree on every node.
    """

    def __init__(self, g: Graph, p: Partition, lam: float = 1.0):
        self.g = g
        self.p = p
        self.lam = lam
        self._wmd_stats: dict[int, tuple[int, int, int]] = {}
        self._w2_all = float(np.dot(self._qhat(), self._qhat()))

    def _qhat(self) -> np.ndarray:
        return self.p.comm_volume.astype(np.float64) / float(2 * self.g.m)

    def _neighbour_counts(self, v: int) -> dict[int, int]:
        counts: dict[int, int] = {}
        for u in self.g.neighbors(v):
            c = int(self.p.assignment[u])
            counts[c] = counts.get(c, 0) + 1
        return counts

    def cada(self, v: int) -> float:
        counts = self._neighbour_counts(v)
        return self.g.degree(v) / max(counts.values())

    def cada_star(self, v: int) -> float:
        return self.p.internal_degree(self.g, v) / self.g.degree(v)

    def wmd(self, v: int) -> float:
        c = int(self.p.assignment[v])
        if c not in self._wmd_stats:
            members = self.p.members(c)
            internal = [self.p.internal_degree(self.g, int(u)) for u in members]
            s = sum(internal)
            sq = sum(x * x for x in internal)
            self._wmd_stats[c] = (len(internal), s, sq)
        size, s, sq = self._wmd_stats[c]
        var_term = size * sq - s * s
        if var_term <= 0:
            return 0.0
        own = self.p.internal_degree(self.g, v)
        return (own * size - s) / math.sqrt(var_term)

    def cpc(self, v: int) -> float:
        deg = self.g.degree(v)
        return 1.0 - sum((cnt / deg) ** 2 for cnt in self._neighbour_counts(v).values())

    def cas(self, v: int) -> float:
        deg = self.g.degree(v)
        own = self.p.internal_degree(self.g, v)
        vol_own = int(self.p.comm_volume[self.p.assignment[v]])
        return 2.0 * (own / deg - self.lam * (vol_own - deg) / float(2 * self.g.m))

    def q1_vector(self, v: int) -> dict[int, float]:
        deg = self.g.degree(v)
        return {c: cnt / deg for c, cnt in self._neighbour_counts(v).items()}

    def q2_vector(self, v: int) -> dict[int, float]:
        deg = self.g.degree(v)
        acc: dict[int, float] = {}
        for u in self.g.neighbors(v):
            for c, prob in self.q1_vector(int(u)).items():
                acc[c] = acc.get(c, 0.0) + prob / deg
        return acc

    def _distances(self, dist: dict[int, float], suffix: str) -> dict[str, float]:
        qhat = self._qhat()
        l1 = 0.0
        l2sq = self._w2_all
        kl = 0.0
        cross = 0.0
        sum_w = 0.0
        for c, prob in dist.items():
            w = qhat[c]
            sum_w += w
            l1 += abs(prob - w)
            l2sq += (prob - w) ** 2 - w * w
            kl += prob * math.log(prob / w)
            cross += math.sqrt(prob * w)
        l1 = max(l1 + (1.0 - sum_w), 0.0)
        return {
            f"CD_L1{suffix}": l1,
            f"CD_L2{suffix}": math.sqrt(max(l2sq, 0.0)),
            f"CD_KL{suffix}": kl,
            f"CD_HD{suffix}": math.sqrt(max(1.0 - cross, 0.0)),
        }

    def cd_distances_depth1(self, v: int) -> dict[str, float]:
        return self._distances(self.q1_vector(v), "1")

    def cd_distances_depth2(self, v: int) -> dict[str, float]:
        return self._distances(self.q2_vector(v), "2")

    def compute_all(self, depth2: bool = True) -> FeatureMatrix:
        return compute_community_features(self.g, self.p, self.lam, depth2=depth2)

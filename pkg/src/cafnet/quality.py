"""Partition quality functions and single-node move gains.

All functions score a :class:`~cafnet.partition.Partition` of an undirected
graph. ``generalized_modularity`` is the classic edge-contribution minus
degree-tax score with a resolution parameter; ``regularized_modularity``
additionally rewards single-node communities (treated as an outlier set)
with a per-volume bonus ``beta`` and renormalizes both terms accordingly.

The two ``move_gain_*`` functions are the first-order pieces of the change
in the regularized score when a node leaves its community and becomes a
singleton: the edge contribution part (depends on ``beta``) and the degree
tax part (depends on the resolution). The ``beta`` at which they cancel is
the community association strength of the node, see
:func:`cafnet.features.cas`.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError, ParameterError
from .graph import Graph
from .partition import Partition


def _check_resolution(lam: float) -> None:
    if not lam > 0:
        raise ParameterError(f"resolution must be positive, got {lam}")


def modularity(g: Graph, p: Partition) -> float:
    """Classic modularity, equal to ``generalized_modularity(g, p, 1.0)``."""
    return generalized_modularity(g, p, 1.0)


def generalized_modularity(g: Graph, p: Partition, lam: float) -> float:
    """Edge contribution minus ``lam`` times the degree tax.

    q_lam(A) = sum_i e(A_i)/m  -  lam * sum_i (vol(A_i)/vol(V))^2
    """
    _check_resolution(lam)
    vol_v = float(2 * g.m)
    edge = float(p.comm_internal_edges.sum()) / g.m
    vols = p.comm_volume.astype(np.float64)
    tax = lam * float(np.sum((vols / vol_v) ** 2))
    return edge - tax


def regularized_modularity(g: Graph, p: Partition, lam: float, beta: float) -> float:
    """Generalized modularity with singleton communities given a volume bonus.

    Each single-node community A_i = {v} contributes ``beta * deg(v)`` phantom
    internal edge endpoints, and the total volume grows by the same amount:
    with O the union of singleton communities and Z = beta * vol(O),

        q(A) = sum_i (e(A_i) + [singleton] * beta * vol(A_i) / 2) / (m + Z/2)
             - lam * sum_i (vol(A_i) * (1 + [singleton] * beta) / (vol(V) + Z))^2

    ``beta = 0`` recovers ``generalized_modularity``.
    """
    _check_resolution(lam)
    if beta < 0:
        raise ParameterError(f"singleton bonus must be non-negative, got {beta}")
    singleton = p.comm_size == 1
    vols = p.comm_volume.astype(np.float64)
    z = beta * float(vols[singleton].sum())
    denom_edges = g.m + z / 2.0
    denom_vol = 2.0 * g.m + z
    internal = p.comm_internal_edges.astype(np.float64)
    edge = float(np.sum(internal + np.where(singleton, beta * vols / 2.0, 0.0))) / denom_edges
    scaled = vols * np.where(singleton, 1.0 + beta, 1.0)
    tax = lam * float(np.sum((scaled / denom_vol) ** 2))
    return edge - tax


def move_gain_edge_contribution(g: Graph, p: Partition, v: int, beta: float) -> float:
    """Edge-contribution change when v leaves its community to become a singleton.

    First-order approximation that holds the normalizing volumes fixed:

        (-2 * deg_in(v) + beta * deg(v)) / vol(V)

    where deg_in(v) is the number of neighbours of v in v's own community.
    Undefined when v already forms a singleton community.
    """
    if p.is_singleton(v):
        raise InputError(f"node {v} is already a singleton community; move gain undefined")
    deg_in = p.internal_degree(g, v)
    vol_v = float(2 * g.m)
    return (-2.0 * deg_in + beta * g.degree(v)) / vol_v


def move_gain_degree_tax(g: Graph, p: Partition, v: int, lam: float) -> float:
    """Degree-tax change when v leaves its community to become a singleton.

    Change of the (positive) tax term, so the score change of the move is
    ``move_gain_edge_contribution(...) - move_gain_degree_tax(...)``:

        -2 * lam * (vol(A_v) * deg(v) - deg(v)^2) / vol(V)^2
    """
    _check_resolution(lam)
    if p.is_singleton(v):
        raise InputError(f"node {v} is already a singleton community; move gain undefined")
    d = float(g.degree(v))
    vol_i = float(p.comm_volume[p.assignment[v]])
    vol_v = float(2 * g.m)
    return -2.0 * lam * (vol_i * d - d * d) / (vol_v * vol_v)

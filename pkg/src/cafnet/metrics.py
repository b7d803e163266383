"""Model-free ranking metrics for scored binary labels."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata

from .errors import InputError


def rank_auc(scores, labels) -> float:
    """Probability that a random positive outranks a random negative.

    The Mann-Whitney statistic from average ranks, so ties contribute 1/2.
    Orientation matters: higher scores are treated as more positive.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise InputError(f"scores {scores.shape} and labels {labels.shape} must be equal-length vectors")
    pos = labels == 1
    n1 = int(np.count_nonzero(pos))
    n0 = len(labels) - n1
    if n1 == 0 or n0 == 0:
        raise InputError(f"rank AUC needs both classes, got {n1} positives / {n0} negatives")
    ranks = rankdata(scores)
    u = float(ranks[pos].sum()) - n1 * (n1 + 1) / 2.0
    return u / (n1 * n0)


def oriented_rank_auc(scores, labels) -> float:
    """Rank AUC made orientation-free: max(auc, 1 - auc).

    Useful when a feature separates classes but its sign convention is not
    fixed (low scores may mark positives).
    """
    auc = rank_auc(scores, labels)
    return max(auc, 1.0 - auc)

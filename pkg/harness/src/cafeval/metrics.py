"""Scoring: rank AUC, average precision, and Kendall tau-b.

AUC and average precision are implemented here from their definitions so
toy cases can be checked by hand; tau-b comes from scipy, which already
carries the tie adjustments.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import kendalltau, rankdata

from .errors import InputError


def _check_binary(scores: np.ndarray, labels: np.ndarray) -> tuple[int, int]:
    if scores.shape != labels.shape or scores.ndim != 1:
        raise InputError(f"scores {scores.shape} and labels {labels.shape} must be equal-length vectors")
    n1 = int(np.count_nonzero(labels == 1))
    n0 = len(labels) - n1
    if n1 == 0 or n0 == 0:
        raise InputError(f"need both classes, got {n1} positives / {n0} negatives")
    return n1, n0


def rank_auc(scores, labels) -> float:
    """Probability that a random positive outranks a random negative.

    Mann-Whitney form via average ranks; ties count one half.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n1, n0 = _check_binary(scores, labels)
    ranks = rankdata(scores)
    u = float(ranks[labels == 1].sum()) - n1 * (n1 + 1) / 2.0
    return u / (n1 * n0)


def average_precision(scores, labels) -> float:
    """Area under the precision-recall curve, summed over score thresholds.

    AP = sum over distinct thresholds of (recall step) * precision, with
    thresholds visited from the highest score down.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    n1, _ = _check_binary(scores, labels)
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    tp = np.cumsum(sorted_labels == 1)
    fp = np.cumsum(sorted_labels != 1)
    last = np.nonzero(np.diff(sorted_scores, append=np.nan))[0]
    precision = tp[last] / (tp[last] + fp[last])
    recall = tp[last] / n1
    steps = np.diff(recall, prepend=0.0)
    return float(np.dot(steps, precision))


def tau_b(predicted, target) -> float:
    """Kendall tau-b between two vectors; 0.0 when either side is constant."""
    predicted = np.asarray(predicted, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if predicted.shape != target.shape or predicted.ndim != 1:
        raise InputError(f"shapes {predicted.shape} and {target.shape} must be equal-length vectors")
    stat = kendalltau(predicted, target).statistic
    return 0.0 if np.isnan(stat) else float(stat)

"""Scoring functions against hand-computed values and reference code."""

import numpy as np
import pytest
from scipy.stats import kendalltau
from sklearn.metrics import average_precision_score, roc_auc_score

from cafeval import InputError, average_precision, rank_auc, tau_b


def test_auc_perfect_separation():
    assert rank_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0
    assert rank_auc([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0]) == 0.0


def test_auc_five_point_hand_value():
    # positives 0.35, 0.8, 0.55 vs negatives 0.1, 0.4: five of six pairs won
    assert rank_auc([0.1, 0.4, 0.35, 0.8, 0.55], [0, 0, 1, 1, 1]) == 5.0 / 6.0


def test_auc_ties_count_one_half():
    assert rank_auc([0.7, 0.7], [1, 0]) == 0.5
    assert rank_auc([0.3, 0.5, 0.5, 0.9], [0, 1, 0, 1]) == 3.5 / 4.0


def test_aps_perfect_separation_is_one():
    assert average_precision([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0


def test_aps_hand_values():
    # thresholds 4 and 2 add 1/2 * 1 and 1/2 * 2/3
    got = average_precision([4.0, 3.0, 2.0, 1.0], [1, 0, 1, 0])
    assert got == pytest.approx(5.0 / 6.0, abs=1e-15)
    # contributions 1/3 * 1 + 1/3 * 2/3 + 1/3 * 3/4
    got = average_precision([0.9, 0.8, 0.7, 0.6, 0.5], [1, 0, 1, 1, 0])
    assert got == pytest.approx(29.0 / 36.0, abs=1e-15)


def test_aps_tied_scores_group_at_one_threshold():
    assert average_precision([1.0, 1.0, 0.0, 0.0], [1, 0, 1, 0]) == 0.5


def test_aps_constant_scores_equal_positive_rate():
    assert average_precision([0.5] * 4, [1, 0, 0, 1]) == 0.5


def test_metrics_match_reference_implementations():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(20, 200))
        scores = rng.integers(0, 8, size=n) / 7.0  # coarse grid forces ties
        labels = (rng.random(n) < 0.4).astype(int)
        if labels.min() == labels.max():
            continue
        assert rank_auc(scores, labels) == pytest.approx(roc_auc_score(labels, scores), abs=1e-12)
        assert average_precision(scores, labels) == pytest.approx(
            average_precision_score(labels, scores), abs=1e-12
        )


def test_tau_b_matches_scipy_and_zeroes_constant_input():
    rng = np.random.default_rng(8)
    a = rng.normal(size=300)
    b = a + rng.normal(size=300)
    assert tau_b(a, b) == pytest.approx(kendalltau(a, b).statistic, abs=1e-15)
    assert tau_b(np.ones(50), rng.normal(size=50)) == 0.0


def test_metric_input_validation():
    with pytest.raises(InputError):
        rank_auc([0.1, 0.2], [1, 1])
    with pytest.raises(InputError):
        average_precision([0.1, 0.2], [0, 0])
    with pytest.raises(InputError):
        rank_auc([0.1, 0.2, 0.3], [1, 0])
    with pytest.raises(InputError):
        tau_b([0.1, 0.2, 0.3], [1.0, 2.0])

"""The three experiments and their shared split protocol.

Every experiment consumes one joined feature table plus binary labels,
splits the nodes once (stratified by label, seeded), fits scikit-learn
models on the train side, and scores on the test side:

- info_overlap: each community-aware column in turn becomes a regression
  target for the classical columns; the table reports the best test-set
  Kendall tau-b over the configured model set.
- one_way_power: each single feature (plus the WMD+CPC pair) is the only
  input to a random-forest classifier; the table reports test AUC and
  average precision.
- combined_importance: one random forest on all features; per-column
  permutation importance measured as the drop in test average precision,
  reported with integer ranks (1 = most important).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParameterError
from .io import FeatureTable, ResultTable
from .metrics import average_precision, rank_auc, tau_b
from .models import MODEL_DEFAULTS, REGRESSOR_IDS, build_classifier, build_regressor

METRIC_IDS = ("auc", "aps", "tau")


@dataclass
class ExperimentConfig:
    """Inputs and protocol settings shared by all experiments."""

    features: list[str]
    labels: str
    out_dir: str = "."
    split: float = 0.7
    seed: int = 0
    models: tuple[str, ...] = REGRESSOR_IDS
    metrics: tuple[str, ...] = METRIC_IDS

    def __post_init__(self) -> None:
        if not self.features:
            raise ParameterError("need at least one feature CSV")
        if not 0.0 < self.split < 1.0:
            raise ParameterError(f"split fraction must be in (0, 1), got {self.split}")
        unknown = [m for m in self.models if m not in REGRESSOR_IDS]
        if unknown:
            raise ParameterError(f"unknown model ids {unknown}; known: {', '.join(REGRESSOR_IDS)}")
        if not self.models:
            raise ParameterError("model set must not be empty")
        bad = [m for m in self.metrics if m not in METRIC_IDS]
        if bad:
            raise ParameterError(f"unknown metric ids {bad}; known: {', '.join(METRIC_IDS)}")


def stratified_split(labels: np.ndarray, fraction: float, seed: int) -> np.ndarray:
    """Boolean train mask; per class, round(fraction * count) nodes train.

    Both classes therefore keep their proportions to within one sample on
    each side of the split.
    """
    if not 0.0 < fraction < 1.0:
        raise ParameterError(f"split fraction must be in (0, 1), got {fraction}")
    rng = np.random.default_rng(seed)
    train = np.zeros(len(labels), dtype=bool)
    for value in np.unique(labels):
        idx = np.flatnonzero(labels == value)
        take = int(round(fraction * len(idx)))
        train[rng.permutation(idx)[:take]] = True
    return train


def _split_or_fail(labels: np.ndarray, cfg: ExperimentConfig) -> np.ndarray:
    train = stratified_split(labels, cfg.split, cfg.seed)
    for side, mask in (("train", train), ("test", ~train)):
        if len(np.unique(labels[mask])) < 2:
            raise InputError(f"the {side} split holds a single class; need more rows per class")
    return train


def info_overlap(table: FeatureTable, labels: np.ndarray, cfg: ExperimentConfig) -> ResultTable:
    """Best tau-b for recovering each community column from the classical ones."""
    targets = table.community_names()
    predictors = table.classical_names()
    if not targets:
        raise InputError("no community-aware columns in the feature table")
    if not predictors:
        raise InputError("no classical columns in the feature table")
    train = _split_or_fail(labels, cfg)
    x = table.columns(predictors)
    rows = []
    for name in targets:
        y = table.column(name)
        best = -1.0
        for model_id in cfg.models:
            model = build_regressor(model_id, cfg.seed)
            model.fit(x[train], y[train])
            best = max(best, tau_b(model.predict(x[~train]), y[~train]))
        rows.append([name, best])
    rows.sort(key=lambda row: -np.mean(row[1:]))
    return ResultTable(names=["target", "tau_b"], rows=rows)


def _score_columns(table: FeatureTable, labels: np.ndarray, cfg: ExperimentConfig, cols):
    train = _split_or_fail(labels, cfg)
    x = table.columns(cols)
    clf = build_classifier(cfg.seed)
    clf.fit(x[train], labels[train])
    scores = clf.predict_proba(x[~train])[:, 1]
    return rank_auc(scores, labels[~train]), average_precision(scores, labels[~train])


def one_way_power(table: FeatureTable, labels: np.ndarray, cfg: ExperimentConfig) -> ResultTable:
    """Test AUC and average precision of each feature as the sole predictor."""
    groups = [(name, [name]) for name in table.names]
    if "WMD" in table.names and "CPC" in table.names:
        groups.append(("WMD+CPC", ["WMD", "CPC"]))
    wanted = [m for m in ("auc", "aps") if m in cfg.metrics]
    if not wanted:
        raise ParameterError("one_way_power needs auc or aps in the metric set")
    rows = []
    for label, cols in groups:
        auc, aps = _score_columns(table, labels, cfg, cols)
        values = {"auc": auc, "aps": aps}
        rows.append([label] + [values[m] for m in wanted])
    return ResultTable(names=["feature"] + wanted, rows=rows)


def combined_importance(table: FeatureTable, labels: np.ndarray, cfg: ExperimentConfig) -> ResultTable:
    """Permutation importance of every column under one all-feature forest.

    Importance is the mean drop in test average precision when the column
    is shuffled on the test side; ranks break ties by column order.
    """
    train = _split_or_fail(labels, cfg)
    x = table.columns(table.names)
    clf = build_classifier(cfg.seed)
    clf.fit(x[train], labels[train])
    x_test = x[~train]
    y_test = labels[~train]
    baseline = average_precision(clf.predict_proba(x_test)[:, 1], y_test)
    repeats = MODEL_DEFAULTS["permutation_repeats"]
    importance = np.zeros(len(table.names))
    for j in range(len(table.names)):
        rng = np.random.default_rng((cfg.seed, j))
        drops = []
        for _ in range(repeats):
            shuffled = x_test.copy()
            shuffled[:, j] = shuffled[rng.permutation(len(shuffled)), j]
            drops.append(baseline - average_precision(clf.predict_proba(shuffled)[:, 1], y_test))
        importance[j] = np.mean(drops)
    order = sorted(range(len(table.names)), key=lambda j: (-importance[j], j))
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(1, len(order) + 1)
    rows = [[name, importance[j], int(rank[j])] for j, name in enumerate(table.names)]
    return ResultTable(names=["feature", "importance", "rank"], rows=rows)

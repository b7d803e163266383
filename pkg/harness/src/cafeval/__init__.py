"""Evaluation harness for node-feature CSV files.

Given a feature table and binary node labels from the companion feature
extractor (or any producer of the same CSV layout), this package answers
three questions: how well classical features predict each community-aware
feature (rank-correlation overlap), how well each single feature predicts
the labels (AUC and average precision), and which features an all-feature
random forest actually relies on (permutation importance). Everything is
seeded and emits plain CSV tables plus bar charts.
"""

from .errors import CafevalError, InputError, ParameterError
from .experiments import (
    METRIC_IDS,
    ExperimentConfig,
    combined_importance,
    info_overlap,
    one_way_power,
    stratified_split,
)
from .io import COMMUNITY_COLUMNS, FeatureTable, ResultTable, load_features, load_labels
from .metrics import average_precision, rank_auc, tau_b
from .models import MODEL_DEFAULTS, REGRESSOR_IDS, build_classifier, build_regressor

__version__ = "0.1.0"

__all__ = [
    "COMMUNITY_COLUMNS",
    "CafevalError",
    "ExperimentConfig",
    "FeatureTable",
    "InputError",
    "METRIC_IDS",
    "MODEL_DEFAULTS",
    "ParameterError",
    "REGRESSOR_IDS",
    "ResultTable",
    "average_precision",
    "build_classifier",
    "build_regressor",
    "combined_importance",
    "info_overlap",
    "load_features",
    "load_labels",
    "one_way_power",
    "rank_auc",
    "stratified_split",
    "tau_b",
    "__version__",
]

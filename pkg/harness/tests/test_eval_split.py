"""Stratified splitting and configuration validation."""

import numpy as np
import pytest

from cafeval import ExperimentConfig, ParameterError, stratified_split


def test_split_keeps_class_proportions_within_one_sample():
    rng = np.random.default_rng(4)
    for seed in range(6):
        labels = (rng.random(997) < 0.3).astype(np.int64)
        train = stratified_split(labels, 0.7, seed)
        for value in (0, 1):
            total = int(np.sum(labels == value))
            got = int(np.sum(labels[train] == value))
            assert abs(got - 0.7 * total) <= 0.5
        assert 0 < train.sum() < len(labels)


def test_split_is_deterministic_per_seed():
    labels = np.array([0, 1] * 50)
    a = stratified_split(labels, 0.7, 12)
    b = stratified_split(labels, 0.7, 12)
    c = stratified_split(labels, 0.7, 13)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_split_fraction_validation():
    labels = np.array([0, 1] * 10)
    for bad in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ParameterError):
            stratified_split(labels, bad, 1)


def test_config_validation():
    ok = dict(features=["f.csv"], labels="l.csv")
    ExperimentConfig(**ok)
    with pytest.raises(ParameterError):
        ExperimentConfig(features=[], labels="l.csv")
    with pytest.raises(ParameterError):
        ExperimentConfig(**ok, split=1.0)
    with pytest.raises(ParameterError):
        ExperimentConfig(**ok, split=0.0)
    with pytest.raises(ParameterError):
        ExperimentConfig(**ok, models=("rf", "mystery"))
    with pytest.raises(ParameterError):
        ExperimentConfig(**ok, models=())
    with pytest.raises(ParameterError):
        ExperimentConfig(**ok, metrics=("auc", "f1"))

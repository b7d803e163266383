"""Model zoo: fixed, seedable scikit-learn estimators.

The regressor set serves the information-overlap experiment; the single
random-forest classifier serves the predictive-power and importance
experiments. Hyperparameters live in MODEL_DEFAULTS so runs can record
exactly what was fit.
"""

from __future__ import annotations

from sklearn.ensemble import (
    GradientBoostingRegressor,
    RandomForestClassifier,
    RandomForestRegressor,
)
from sklearn.linear_model import LinearRegression, Ridge

from .errors import ParameterError

MODEL_DEFAULTS = {
    "rf": {"n_estimators": 100},
    "gbt": {"n_estimators": 100, "learning_rate": 0.1},
    "linear": {},
    "ridge": {"alpha": 1.0},
    "rf_classifier": {"n_estimators": 100},
    "permutation_repeats": 5,
}

REGRESSOR_IDS = ("rf", "gbt", "linear", "ridge")


def build_regressor(model_id: str, seed: int):
    if model_id == "rf":
        return RandomForestRegressor(random_state=seed, n_jobs=1, **MODEL_DEFAULTS["rf"])
    if model_id == "gbt":
        return GradientBoostingRegressor(random_state=seed, **MODEL_DEFAULTS["gbt"])
    if model_id == "linear":
        return LinearRegression()
    if model_id == "ridge":
        return Ridge(**MODEL_DEFAULTS["ridge"])
    raise ParameterError(f"unknown model id {model_id!r}; known: {', '.join(REGRESSOR_IDS)}")


def build_classifier(seed: int) -> RandomForestClassifier:
    return RandomForestClassifier(random_state=seed, n_jobs=1, **MODEL_DEFAULTS["rf_classifier"])

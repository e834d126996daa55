"""From-scratch classifiers and evaluation metrics.

Model kinds, their classes and default hyperparameters live in
MODEL_KINDS; third-party boosted-tree engines are deliberately not
implemented and listed in UNSUPPORTED_KINDS so the benchmark grid can
mark those cells instead of failing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..exceptions import ConfigError, QembenchError
from .ensemble import AdaBoostClassifier, RandomForestClassifier
from .knn import KnnClassifier
from .logistic import LogisticRegressionClassifier
from .metrics import MetricBundle, metrics, roc_auc
from .svm import SvmClassifier
from .tree import DecisionTreeClassifier

__all__ = [
    "AdaBoostClassifier",
    "DecisionTreeClassifier",
    "KnnClassifier",
    "LogisticRegressionClassifier",
    "MetricBundle",
    "ModelSpec",
    "MODEL_KINDS",
    "RandomForestClassifier",
    "SvmClassifier",
    "UNSUPPORTED_KINDS",
    "fit",
    "metrics",
    "predict",
    "predict_score",
    "roc_auc",
]

# kind -> (class, fixed ctor args, default tunable hyperparameters)
MODEL_KINDS = {
    "logreg": (LogisticRegressionClassifier, {}, {"l2": 1.0, "tol": 1e-6, "max_iter": 100}),
    "knn": (KnnClassifier, {}, {"k": 5}),
    "svm-linear": (SvmClassifier, {"kernel": "linear"}, {"c": 1.0, "gamma": None, "tol": 1e-3}),
    "svm-poly": (
        SvmClassifier,
        {"kernel": "poly"},
        {"c": 1.0, "gamma": None, "degree": 3, "tol": 1e-3},
    ),
    "svm-rbf": (SvmClassifier, {"kernel": "rbf"}, {"c": 1.0, "gamma": None, "tol": 1e-3}),
    "svm-sigmoid": (SvmClassifier, {"kernel": "sigmoid"}, {"c": 1.0, "gamma": None, "tol": 1e-3}),
    "decision-tree": (
        DecisionTreeClassifier,
        {},
        {"max_depth": 12, "min_leaf": 2, "max_features": None},
    ),
    "random-forest": (
        RandomForestClassifier,
        {},
        {
            "n_trees": 100,
            "max_depth": 12,
            "min_leaf": 2,
            "max_features": "sqrt",
            "bootstrap": True,
        },
    ),
    "adaboost": (AdaBoostClassifier, {}, {"n_rounds": 100, "max_depth": 1}),
}

# Named in the benchmark's model axis but intentionally not reimplemented.
UNSUPPORTED_KINDS = ("lightgbm", "catboost")


@dataclass(frozen=True)
class ModelSpec:
    """A model kind plus hyperparameter overrides and a seed."""

    kind: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.kind in UNSUPPORTED_KINDS:
            raise ConfigError(
                f"model kind {self.kind!r} is a third-party engine marked unsupported"
            )
        if self.kind not in MODEL_KINDS:
            raise ConfigError(
                f"unknown model kind {self.kind!r}; expected one of {sorted(MODEL_KINDS)}"
            )
        _, _, defaults = MODEL_KINDS[self.kind]
        unknown = set(self.hyperparameters) - set(defaults)
        if unknown:
            raise ConfigError(
                f"unknown hyperparameters for {self.kind!r}: {sorted(unknown)}; "
                f"allowed: {sorted(defaults)}"
            )
        try:
            self.build()
        except QembenchError as exc:
            raise ConfigError(f"bad hyperparameters for {self.kind!r}: {exc}") from None

    def resolved_hyperparameters(self) -> dict:
        _, _, defaults = MODEL_KINDS[self.kind]
        merged = dict(defaults)
        merged.update(self.hyperparameters)
        return merged

    def build(self):
        cls, fixed, _ = MODEL_KINDS[self.kind]
        return cls(**fixed, **self.resolved_hyperparameters(), seed=self.seed)


def fit(spec: ModelSpec, X, y):
    """Construct and train the model named by the spec."""
    return spec.build().fit(X, y)


def predict(model, X):
    return model.predict(X)


def predict_score(model, X):
    return model.predict_score(X)

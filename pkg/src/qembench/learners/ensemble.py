"""Tree ensembles: bootstrap random forest and boosted stumps."""

from __future__ import annotations

import numpy as np

from ..exceptions import DataError
from .tree import DecisionTreeClassifier


class RandomForestClassifier:
    """Bagged trees with per-node feature subsampling; votes averaged.

    With bootstrap=False, n_trees=1 and max_features=None this reduces
    exactly to a single DecisionTreeClassifier.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = 12,
        min_leaf: int = 2,
        max_features="sqrt",
        bootstrap: bool = True,
        seed: int = 0,
    ):
        if n_trees < 1:
            raise DataError(f"n_trees must be >= 1, got {n_trees}")
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed
        self.trees_: list[DecisionTreeClassifier] = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(int)
        if len(np.unique(y)) < 2:
            raise DataError("training labels contain a single class")
        seeds = np.random.SeedSequence(self.seed).spawn(self.n_trees)
        self.trees_ = []
        for t in range(self.n_trees):
            rng = np.random.default_rng(seeds[t])
            if self.bootstrap:
                rows = rng.integers(0, X.shape[0], size=X.shape[0])
                X_t, y_t = X[rows], y[rows]
            else:
                X_t, y_t = X, y
            tree = DecisionTreeClassifier(
                max_depth=self.max_depth,
                min_leaf=self.min_leaf,
                max_features=self.max_features,
            )
            tree.fit(X_t, y_t, rng=rng)
            self.trees_.append(tree)
        return self

    def predict_score(self, X) -> np.ndarray:
        if not self.trees_:
            raise DataError("model used before fit")
        total = np.zeros(np.asarray(X).shape[0])
        for tree in self.trees_:
            total += tree.predict_score(X)
        return total / len(self.trees_)

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)


class AdaBoostClassifier:
    """Discrete boosting over weighted trees (depth-1 stumps by default).

    Round weights update multiplicatively from the weighted error; a
    round whose weak learner is no better than chance stops boosting
    early (it is not an error). A weighted error of zero also stops,
    with the vote weight evaluated at a floor error of 1e-12.
    """

    def __init__(self, n_rounds: int = 100, max_depth: int = 1, seed: int = 0):
        if n_rounds < 1:
            raise DataError(f"n_rounds must be >= 1, got {n_rounds}")
        self.n_rounds = n_rounds
        self.max_depth = max_depth
        self.seed = seed
        self.stumps_: list[DecisionTreeClassifier] = []
        self.votes_: list[float] = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(int)
        if len(np.unique(y)) < 2:
            raise DataError("training labels contain a single class")
        n = X.shape[0]
        y_pm = np.where(y == 1, 1.0, -1.0)
        w = np.full(n, 1.0 / n)
        self.stumps_ = []
        self.votes_ = []
        for _ in range(self.n_rounds):
            stump = DecisionTreeClassifier(
                max_depth=self.max_depth, min_leaf=1, max_features=None, seed=self.seed
            )
            stump.fit(X, y, sample_weight=w)
            pred_pm = np.where(stump.predict(X) == 1, 1.0, -1.0)
            err = float(np.sum(w[pred_pm != y_pm]))
            if err >= 0.5:
                break
            err = max(err, 1e-12)
            vote = 0.5 * np.log((1.0 - err) / err)
            self.stumps_.append(stump)
            self.votes_.append(vote)
            if err <= 1e-12:
                break
            w = w * np.exp(-vote * y_pm * pred_pm)
            w /= w.sum()
        return self

    def decision_function(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        margin = np.zeros(X.shape[0])
        for stump, vote in zip(self.stumps_, self.votes_):
            margin += vote * np.where(stump.predict(X) == 1, 1.0, -1.0)
        return margin

    def predict_score(self, X) -> np.ndarray:
        # Chance score when every round stopped early.
        if not self.stumps_:
            return np.full(np.asarray(X).shape[0], 0.5)
        return 1.0 / (1.0 + np.exp(-self.decision_function(X)))

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)

"""k-nearest-neighbor classifier (Euclidean, majority vote)."""

from __future__ import annotations

import numpy as np

from ..exceptions import DataError, ShapeError


class KnnClassifier:
    """Stores the training set verbatim; distance ties break toward the
    lowest training-row index (stable sort), so prediction is fully
    deterministic."""

    def __init__(self, k: int = 5, seed: int = 0):
        if k < 1:
            raise DataError(f"k must be >= 1, got {k}")
        self.k = k
        self.X_: np.ndarray | None = None
        self.y_: np.ndarray | None = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(int)
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if X.shape[0] != y.shape[0]:
            raise ShapeError("row count mismatch between X and y")
        if X.shape[0] < self.k:
            raise DataError(f"k={self.k} exceeds training size {X.shape[0]}")
        self.X_ = X
        self.y_ = y
        return self

    def predict_score(self, X) -> np.ndarray:
        if self.X_ is None:
            raise DataError("model used before fit")
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.X_.shape[1]:
            raise ShapeError(f"expected {self.X_.shape[1]} features, got {X.shape[1]}")
        # Squared distances via the expansion; no sqrt needed for ranking.
        cross = X @ self.X_.T
        d_sq = np.sum(X**2, axis=1)[:, None] - 2.0 * cross + np.sum(self.X_**2, axis=1)[None, :]
        scores = np.empty(X.shape[0])
        for i in range(X.shape[0]):
            neighbors = np.argsort(d_sq[i], kind="mergesort")[: self.k]
            scores[i] = float(np.mean(self.y_[neighbors]))
        return scores

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)

"""Decision tree classifier grown by weighted Gini impurity.

Supports sample weights (needed by the boosting wrapper), a depth cap,
minimum leaf size by sample count, and per-node feature subsampling
(needed by the forest). Fully deterministic: split ties resolve to the
lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import DataError, ShapeError


@dataclass
class _Node:
    prob: float
    feature: int = -1
    threshold: float = 0.0
    left: "_Node | None" = None
    right: "_Node | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _weighted_gini(w1: float, w_total: float) -> float:
    if w_total <= 0:
        return 0.0
    p1 = w1 / w_total
    return 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1)


class DecisionTreeClassifier:
    """max_depth=None grows until purity or min_leaf blocks every split.

    max_features: None (all), "sqrt", or an int; subsampling draws from
    the seeded generator passed at fit time or built from `seed`.
    """

    def __init__(
        self,
        max_depth: int | None = 12,
        min_leaf: int = 2,
        max_features=None,
        seed: int = 0,
    ):
        if max_depth is not None and max_depth < 1:
            raise DataError(f"max_depth must be >= 1 or None, got {max_depth}")
        if min_leaf < 1:
            raise DataError(f"min_leaf must be >= 1, got {min_leaf}")
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.max_features = max_features
        self.seed = seed
        self.root_: _Node | None = None
        self.n_features_: int | None = None

    def _n_candidate_features(self, d: int) -> int:
        if self.max_features is None:
            return d
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(d)))
        m = int(self.max_features)
        if not 1 <= m <= d:
            raise DataError(f"max_features must be in [1, {d}], got {m}")
        return m

    def _best_split(self, X, y, w, idx, feats):
        """Return (gain, feature, threshold) or None."""
        w_node = w[idx]
        y_node = y[idx]
        w_total = float(w_node.sum())
        parent = _weighted_gini(float(w_node[y_node == 1].sum()), w_total)
        best_gain = 0.0
        best = None
        for f in feats:
            xs = X[idx, f]
            order = np.argsort(xs, kind="mergesort")
            xs_sorted = xs[order]
            w_sorted = w_node[order]
            w1_sorted = np.where(y_node[order] == 1, w_sorted, 0.0)
            cum_w = np.cumsum(w_sorted)
            cum_w1 = np.cumsum(w1_sorted)
            n = len(idx)
            # Split after position i keeps i+1 rows left; enforce min_leaf
            # by count and require distinct adjacent values.
            pos = np.arange(self.min_leaf - 1, n - self.min_leaf)
            if len(pos) == 0:
                continue
            valid = xs_sorted[pos] < xs_sorted[pos + 1]
            pos = pos[valid]
            if len(pos) == 0:
                continue
            w_left = cum_w[pos]
            w1_left = cum_w1[pos]
            w_right = w_total - w_left
            w1_right = cum_w1[-1] - w1_left
            with np.errstate(invalid="ignore", divide="ignore"):
                p1l = np.where(w_left > 0, w1_left / w_left, 0.0)
                p1r = np.where(w_right > 0, w1_right / w_right, 0.0)
            gini_left = 1.0 - p1l**2 - (1.0 - p1l) ** 2
            gini_right = 1.0 - p1r**2 - (1.0 - p1r) ** 2
            weighted = (w_left * gini_left + w_right * gini_right) / w_total
            gains = parent - weighted
            # Ties (within rounding) resolve to the lowest threshold, then
            # the lowest feature index, for full determinism.
            top = float(np.max(gains))
            k = int(np.argmax(gains >= top - 1e-12))
            if gains[k] > best_gain + 1e-12:
                best_gain = float(gains[k])
                threshold = 0.5 * (xs_sorted[pos[k]] + xs_sorted[pos[k] + 1])
                best = (best_gain, f, float(threshold))
        return best

    def _grow(self, X, y, w, idx, depth, rng) -> _Node:
        w_node = w[idx]
        w_total = float(w_node.sum())
        prob = float(w_node[y[idx] == 1].sum() / w_total) if w_total > 0 else 0.5
        node = _Node(prob=prob)
        if prob in (0.0, 1.0):
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node
        if len(idx) < 2 * self.min_leaf:
            return node
        d = X.shape[1]
        m = self._n_candidate_features(d)
        feats = np.arange(d) if m == d else np.sort(rng.permutation(d)[:m])
        found = self._best_split(X, y, w, idx, feats)
        if found is None:
            return node
        _, node.feature, node.threshold = found
        go_left = X[idx, node.feature] <= node.threshold
        node.left = self._grow(X, y, w, idx[go_left], depth + 1, rng)
        node.right = self._grow(X, y, w, idx[~go_left], depth + 1, rng)
        return node

    def fit(self, X, y, sample_weight=None, rng=None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(int)
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if X.shape[0] != y.shape[0]:
            raise ShapeError("row count mismatch between X and y")
        if sample_weight is None:
            w = np.full(X.shape[0], 1.0 / X.shape[0])
        else:
            w = np.asarray(sample_weight, dtype=float)
            if w.shape != y.shape or np.any(w < 0) or w.sum() <= 0:
                raise DataError("sample weights must be non-negative with positive sum")
        if rng is None:
            rng = np.random.default_rng(self.seed)
        self.n_features_ = X.shape[1]
        self.root_ = self._grow(X, y, w, np.arange(X.shape[0]), 0, rng)
        return self

    def predict_score(self, X) -> np.ndarray:
        if self.root_ is None:
            raise DataError("model used before fit")
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features_:
            raise ShapeError(f"expected {self.n_features_} features, got {X.shape[1]}")
        scores = np.empty(X.shape[0])

        def route(node: _Node, rows: np.ndarray):
            if node.is_leaf:
                scores[rows] = node.prob
                return
            go_left = X[rows, node.feature] <= node.threshold
            route(node.left, rows[go_left])
            route(node.right, rows[~go_left])

        route(self.root_, np.arange(X.shape[0]))
        return scores

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)

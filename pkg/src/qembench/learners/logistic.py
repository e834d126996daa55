"""L2-regularized logistic regression trained by damped Newton steps."""

from __future__ import annotations

import numpy as np

from ..exceptions import DataError, ShapeError


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticRegressionClassifier:
    """Minimizes mean log-loss + (l2/2n)||w||^2 (intercept unpenalized).

    Converges to max |gradient| < tol or stops at max_iter Newton steps
    with backtracking line search.
    """

    def __init__(self, l2: float = 1.0, tol: float = 1e-6, max_iter: int = 100, seed: int = 0):
        if l2 < 0:
            raise DataError(f"l2 strength must be >= 0, got {l2}")
        self.l2 = l2
        self.tol = tol
        self.max_iter = max_iter
        self.coef_: np.ndarray | None = None  # (d + 1,), intercept last
        self.n_features_: int | None = None

    def _loss_grad(self, design, y, w, n):
        z = design @ w
        # log(1 + e^{-m}) with m = (2y-1) z, computed stably
        margins = np.where(y == 1, z, -z)
        loss = float(np.mean(np.logaddexp(0.0, -margins)))
        penalty_vec = np.append(w[:-1], 0.0)
        loss += 0.5 * self.l2 * float(penalty_vec @ penalty_vec) / n
        probs = _sigmoid(z)
        grad = design.T @ (probs - y) / n + self.l2 * penalty_vec / n
        return loss, grad, probs

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(float)
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if len(np.unique(y)) < 2:
            raise DataError("training labels contain a single class")
        n, d = X.shape
        design = np.hstack([X, np.ones((n, 1))])
        w = np.zeros(d + 1)
        reg = self.l2 / n * np.eye(d + 1)
        reg[-1, -1] = 0.0

        loss, grad, probs = self._loss_grad(design, y, w, n)
        for _ in range(self.max_iter):
            if float(np.max(np.abs(grad))) < self.tol:
                break
            weights = probs * (1.0 - probs)
            hessian = (design * weights[:, None]).T @ design / n + reg
            # Tiny ridge keeps the solve well-posed on separable data.
            hessian += 1e-12 * np.eye(d + 1)
            step = np.linalg.solve(hessian, grad)
            t = 1.0
            for _ in range(50):
                new_loss, new_grad, new_probs = self._loss_grad(design, y, w - t * step, n)
                if new_loss <= loss:
                    break
                t *= 0.5
            w = w - t * step
            loss, grad, probs = new_loss, new_grad, new_probs

        self.coef_ = w
        self.n_features_ = d
        return self

    def gradient_max_norm(self, X, y) -> float:
        """Max-norm of the training gradient at the fitted weights."""
        X = np.asarray(X, dtype=float)
        y = np.asarray(y).astype(float)
        n = X.shape[0]
        design = np.hstack([X, np.ones((n, 1))])
        _, grad, _ = self._loss_grad(design, y, self.coef_, n)
        return float(np.max(np.abs(grad)))

    def predict_score(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.coef_ is None:
            raise DataError("model used before fit")
        if X.shape[1] != self.n_features_:
            raise ShapeError(f"expected {self.n_features_} features, got {X.shape[1]}")
        return _sigmoid(X @ self.coef_[:-1] + self.coef_[-1])

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)

"""Kernel SVM trained by sequential minimal optimization.

Solves the dual soft-margin problem by pairwise multiplier updates on the
maximal-violating pair, stopping when the KKT gap m(alpha) - M(alpha)
drops below the tolerance. Selection is fully deterministic (no random
restarts). Kernels that are not positive semidefinite (sigmoid) get a
curvature floor on the pair subproblem.
"""

from __future__ import annotations

import numpy as np

from ..exceptions import DataError, ShapeError

KERNELS = ("linear", "poly", "rbf", "sigmoid")

_CURVATURE_FLOOR = 1e-12
_BOUND_EPS = 1e-12


def _kernel_fn(kind: str, gamma: float, degree: int):
    if kind == "linear":
        return lambda A, B: A @ B.T
    if kind == "poly":
        return lambda A, B: (gamma * (A @ B.T)) ** degree
    if kind == "rbf":

        def rbf(A, B):
            d_sq = (
                np.sum(A**2, axis=1)[:, None]
                - 2.0 * (A @ B.T)
                + np.sum(B**2, axis=1)[None, :]
            )
            return np.exp(-gamma * np.maximum(d_sq, 0.0))

        return rbf
    if kind == "sigmoid":
        return lambda A, B: np.tanh(gamma * (A @ B.T))
    raise DataError(f"unknown kernel {kind!r}; expected one of {KERNELS}")


class SvmClassifier:
    """Soft-margin SVM; gamma=None means 1/(n_features * Var(X)).

    `seed` is accepted for interface uniformity; training is
    deterministic and never draws randomness.
    """

    def __init__(
        self,
        kernel: str = "rbf",
        c: float = 1.0,
        gamma: float | None = None,
        degree: int = 3,
        tol: float = 1e-3,
        max_iter: int | None = None,
        seed: int = 0,
    ):
        if kernel not in KERNELS:
            raise DataError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
        if c <= 0:
            raise DataError(f"C must be > 0, got {c}")
        self.kernel = kernel
        self.c = c
        self.gamma = gamma
        self.degree = degree
        self.tol = tol
        self.max_iter = max_iter
        self.seed = seed
        self.alphas_: np.ndarray | None = None
        self.b_: float = 0.0
        self.kkt_gap_: float = float("inf")
        self.n_iter_: int = 0
        self.support_: np.ndarray | None = None
        self.support_coef_: np.ndarray | None = None
        self.n_features_: int | None = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y01 = np.asarray(y).astype(int)
        if not np.all(np.isfinite(X)):
            raise DataError("non-finite feature value")
        if X.shape[0] != y01.shape[0]:
            raise ShapeError("row count mismatch between X and y")
        if len(np.unique(y01)) < 2:
            raise DataError("training labels contain a single class")

        n, d = X.shape
        gamma = self.gamma
        if gamma is None:
            var = float(X.var())
            gamma = 1.0 / (d * var) if var > 0 else 1.0
        self.gamma_value_ = gamma
        self._kernel = _kernel_fn(self.kernel, gamma, self.degree)
        kernel_matrix = self._kernel(X, X)
        yv = np.where(y01 == 1, 1.0, -1.0)
        q = kernel_matrix * np.outer(yv, yv)
        q_diag = np.diag(q).copy()

        c = self.c
        alpha = np.zeros(n)
        grad = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a) at a = 0
        max_iter = self.max_iter if self.max_iter is not None else max(10_000, 100 * n)

        gap = float("inf")
        iteration = 0
        while iteration < max_iter:
            score = -yv * grad
            in_up = ((alpha < c - _BOUND_EPS) & (yv > 0)) | ((alpha > _BOUND_EPS) & (yv < 0))
            in_low = ((alpha < c - _BOUND_EPS) & (yv < 0)) | ((alpha > _BOUND_EPS) & (yv > 0))
            up_scores = np.where(in_up, score, -np.inf)
            low_scores = np.where(in_low, score, np.inf)
            i = int(np.argmax(up_scores))
            j = int(np.argmin(low_scores))
            m_up = up_scores[i]
            m_low = low_scores[j]
            gap = m_up - m_low
            if not np.isfinite(gap) or gap <= self.tol:
                gap = max(gap, 0.0) if np.isfinite(gap) else 0.0
                break

            old_i, old_j = alpha[i], alpha[j]
            if yv[i] != yv[j]:
                quad = q_diag[i] + q_diag[j] + 2.0 * q[i, j]
                quad = max(quad, _CURVATURE_FLOOR)
                delta = (-grad[i] - grad[j]) / quad
                diff = alpha[i] - alpha[j]
                alpha[i] += delta
                alpha[j] += delta
                if diff > 0:
                    if alpha[j] < 0:
                        alpha[j] = 0.0
                        alpha[i] = diff
                else:
                    if alpha[i] < 0:
                        alpha[i] = 0.0
                        alpha[j] = -diff
                if diff > 0:
                    if alpha[i] > c:
                        alpha[i] = c
                        alpha[j] = c - diff
                else:
                    if alpha[j] > c:
                        alpha[j] = c
                        alpha[i] = c + diff
            else:
                quad = q_diag[i] + q_diag[j] - 2.0 * q[i, j]
                quad = max(quad, _CURVATURE_FLOOR)
                delta = (grad[i] - grad[j]) / quad
                total = alpha[i] + alpha[j]
                alpha[i] -= delta
                alpha[j] += delta
                if total > c:
                    if alpha[i] > c:
                        alpha[i] = c
                        alpha[j] = total - c
                    if alpha[j] > c:
                        alpha[j] = c
                        alpha[i] = total - c
                else:
                    if alpha[j] < 0:
                        alpha[j] = 0.0
                        alpha[i] = total
                    if alpha[i] < 0:
                        alpha[i] = 0.0
                        alpha[j] = total
            grad += q[i] * (alpha[i] - old_i) + q[j] * (alpha[j] - old_j)
            iteration += 1

        # Threshold from the optimality interval; free support vectors sit
        # exactly at score = b.
        score = -yv * grad
        in_up = ((alpha < c - _BOUND_EPS) & (yv > 0)) | ((alpha > _BOUND_EPS) & (yv < 0))
        in_low = ((alpha < c - _BOUND_EPS) & (yv < 0)) | ((alpha > _BOUND_EPS) & (yv > 0))
        m_up = float(np.max(np.where(in_up, score, -np.inf)))
        m_low = float(np.min(np.where(in_low, score, np.inf)))
        if np.isfinite(m_up) and np.isfinite(m_low):
            b = 0.5 * (m_up + m_low)
            gap = max(m_up - m_low, 0.0)
        else:
            b = m_up if np.isfinite(m_up) else (m_low if np.isfinite(m_low) else 0.0)
            gap = 0.0

        self.n_iter_ = iteration
        self.kkt_gap_ = float(gap)
        self.b_ = float(b)
        self.alphas_ = alpha
        keep = alpha > _BOUND_EPS
        self.support_ = X[keep].copy()
        self.support_coef_ = (alpha * yv)[keep]
        self.n_features_ = d
        return self

    def max_kkt_violation(self) -> float:
        """KKT gap at the returned solution (0 when fully converged)."""
        return self.kkt_gap_

    def decision_function(self, X) -> np.ndarray:
        if self.support_ is None:
            raise DataError("model used before fit")
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features_:
            raise ShapeError(f"expected {self.n_features_} features, got {X.shape[1]}")
        if len(self.support_) == 0:
            return np.full(X.shape[0], self.b_)
        return self._kernel(X, self.support_) @ self.support_coef_ + self.b_

    def predict_score(self, X) -> np.ndarray:
        # Logistic link: monotone map of the margin into [0, 1] for ROC.
        return 1.0 / (1.0 + np.exp(-np.clip(self.decision_function(X), -500, 500)))

    def predict(self, X) -> np.ndarray:
        return (self.predict_score(X) >= 0.5).astype(int)

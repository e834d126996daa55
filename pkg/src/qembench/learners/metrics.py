"""Binary-classification evaluation metrics.

Ratios with zero denominators are reported as 0.0 and listed in
MetricBundle.degenerate rather than returned as NaN. ROC AUC uses the
rank (Mann-Whitney) formulation with ties counted one half.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import ShapeError


@dataclass(frozen=True)
class MetricBundle:
    accuracy: float
    precision: float
    sensitivity: float
    f1: float
    roc_auc: float
    cohen_kappa: float
    tp: int
    fp: int
    tn: int
    fn: int
    degenerate: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "sensitivity": self.sensitivity,
            "f1": self.f1,
            "roc_auc": self.roc_auc,
            "kappa": self.cohen_kappa,
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
        }


def _tied_ranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with tied values assigned their average rank."""
    order = np.argsort(values, kind="mergesort")
    ranks = np.empty(len(values))
    sorted_vals = values[order]
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def roc_auc(y_true: np.ndarray, scores: np.ndarray) -> tuple[float, bool]:
    """Probability a random positive outranks a random negative.

    Returns (auc, degenerate); degenerate when one class is absent.
    """
    y_true = np.asarray(y_true)
    scores = np.asarray(scores, dtype=float)
    n_pos = int(np.sum(y_true == 1))
    n_neg = int(np.sum(y_true == 0))
    if n_pos == 0 or n_neg == 0:
        return 0.0, True
    ranks = _tied_ranks(scores)
    pos_rank_sum = float(np.sum(ranks[y_true == 1]))
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg), False


def metrics(y_true, y_pred, scores=None) -> MetricBundle:
    """Confusion-matrix metrics, rank AUC and Cohen's kappa.

    `scores` defaults to y_pred when the model exposes no ranking.
    """
    y_true = np.asarray(y_true).astype(int)
    y_pred = np.asarray(y_pred).astype(int)
    if y_true.shape != y_pred.shape or y_true.ndim != 1 or y_true.size == 0:
        raise ShapeError("y_true and y_pred must be equal-length non-empty vectors")
    if scores is None:
        scores = y_pred.astype(float)
    scores = np.asarray(scores, dtype=float)
    if scores.shape != y_true.shape:
        raise ShapeError("scores must match y_true length")

    n = y_true.size
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))

    degenerate: list[str] = []

    def ratio(num: int, den: int, name: str) -> float:
        if den == 0:
            degenerate.append(name)
            return 0.0
        return num / den

    accuracy = (tp + tn) / n
    precision = ratio(tp, tp + fp, "precision")
    sensitivity = ratio(tp, tp + fn, "sensitivity")
    if precision + sensitivity > 0:
        f1 = 2.0 * precision * sensitivity / (precision + sensitivity)
    else:
        degenerate.append("f1")
        f1 = 0.0

    auc, auc_degenerate = roc_auc(y_true, scores)
    if auc_degenerate:
        degenerate.append("roc_auc")

    # Chance-corrected agreement from marginal frequencies.
    p_observed = accuracy
    p_expected = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n)
    if p_expected >= 1.0:
        degenerate.append("kappa")
        kappa = 0.0
    else:
        kappa = (p_observed - p_expected) / (1.0 - p_expected)

    return MetricBundle(
        accuracy=accuracy,
        precision=precision,
        sensitivity=sensitivity,
        f1=f1,
        roc_auc=auc,
        cohen_kappa=kappa,
        tp=tp,
        fp=fp,
        tn=tn,
        fn=fn,
        degenerate=tuple(degenerate),
    )

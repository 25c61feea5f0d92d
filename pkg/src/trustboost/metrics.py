"""Evaluation metrics: rank-based AUC, thresholded F1, mean losses."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import DomainError, UndefinedMetricError
from .losses import LossKind, loss_value


@dataclass
class EvalReport:
    """Named metric values plus an optional per-iteration curve."""

    values: dict[str, float] = field(default_factory=dict)
    curve: list[tuple[int, float]] = field(default_factory=list)


def _binary_arrays(scores, labels):
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels, dtype=float)
    if s.shape != y.shape or s.ndim != 1:
        raise DomainError("scores and labels must be 1-d vectors of equal length")
    if not np.all((y == 0.0) | (y == 1.0)):
        raise DomainError("labels must be in {0, 1}")
    return s, y


def auc(scores, labels) -> float:
    """Rank statistic: P(score of a positive > score of a negative), ties count 1/2.

    Computed via average ranks: (sum of positive ranks - n_pos*(n_pos+1)/2)
    divided by n_pos*n_neg.
    """
    s, y = _binary_arrays(scores, labels)
    n_pos = int(np.sum(y == 1.0))
    n_neg = int(np.sum(y == 0.0))
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC undefined: need at least one positive and one negative")
    ranks = rankdata(s)
    return float((ranks[y == 1.0].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def f1(scores, labels, threshold: float = 0.5) -> float:
    """F1 with class 1 predicted when score >= threshold; degenerate cases give 0."""
    s, y = _binary_arrays(scores, labels)
    pred = s >= threshold
    tp = float(np.sum(pred & (y == 1.0)))
    fp = float(np.sum(pred & (y == 0.0)))
    fn = float(np.sum(~pred & (y == 1.0)))
    if tp == 0.0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


def regression_loss(kind: LossKind, predictions, labels) -> float:
    """Mean per-instance loss of the predictions."""
    p = np.asarray(predictions, dtype=float)
    y = np.asarray(labels, dtype=float)
    if p.shape != y.shape or p.ndim != 1:
        raise DomainError("predictions and labels must be 1-d vectors of equal length")
    return float(np.mean(loss_value(kind, y, p)))

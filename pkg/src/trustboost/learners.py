"""Generic (non-tree) base learners: fit targets z, predict z-hat.

Only linear regression ships; anything exposing fit/predict with the same
shapes slots into the boosting driver unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Diagonal added to the normal equations when the design is rank deficient.
RIDGE_EPS = 1e-8


@dataclass(frozen=True)
class LinearLearner:
    weights: np.ndarray
    intercept: float

    kind = "linear"


def fit_generic(features, targets) -> LinearLearner:
    """Ordinary least squares with intercept.

    Rank-deficient designs (duplicate columns, n < m+1) fall back to a tiny
    ridge so the solution is finite and deterministic.
    """
    X = np.asarray(features, dtype=float)
    z = np.asarray(targets, dtype=float)
    if X.ndim != 2:
        raise DomainError("features must be a 2-d matrix")
    n, m = X.shape
    if n < 1:
        raise DomainError("cannot fit a learner on an empty dataset")
    if z.shape != (n,):
        raise DomainError("targets must match the number of rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(z))):
        raise DomainError("non-finite values in learner inputs")
    design = np.hstack([X, np.ones((n, 1))])
    gram = design.T @ design
    rhs = design.T @ z
    if np.linalg.matrix_rank(design) < m + 1:
        gram = gram + RIDGE_EPS * np.eye(m + 1)
    coef = np.linalg.solve(gram, rhs)
    return LinearLearner(weights=coef[:m].copy(), intercept=float(coef[m]))


def predict_generic(learner: LinearLearner, row) -> float:
    x = np.asarray(row, dtype=float)
    if x.shape != learner.weights.shape:
        raise DomainError(
            f"row has {x.shape} features but the learner expects {learner.weights.shape}"
        )
    return float(x @ learner.weights + learner.intercept)


def predict_generic_batch(learner: LinearLearner, features) -> np.ndarray:
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[1] != learner.weights.shape[0]:
        raise DomainError("feature count does not match the fitted learner")
    return X @ learner.weights + learner.intercept


def learner_to_dict(learner: LinearLearner) -> dict:
    return {
        "type": "linear",
        "weights": [float(w) for w in learner.weights],
        "intercept": float(learner.intercept),
    }


def learner_from_dict(record: dict) -> LinearLearner:
    return LinearLearner(
        weights=np.asarray([float(w) for w in record["weights"]], dtype=float),
        intercept=float(record["intercept"]),
    )

"""Regression tree base learner with shifted-Newton leaf values.

Leaves carry C = -G/(B + alpha*n + beta) where G and B are the node sums of
per-instance gradients and quadratic coefficients and alpha*n + beta is the
per-leaf radius shift.  Splits are found by exact greedy search over all
(feature, midpoint) candidates, scored by the drop in the per-leaf quadratic
objective (1/2)*B*C^2 + G*C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleRadiusError

GAIN_STYLES = ("reduction", "penalized")


@dataclass(frozen=True)
class TreeConfig:
    max_depth: int = 6
    min_samples_leaf: int = 1
    min_gain: float = 0.0
    # Zero out all quadratic coefficients: pure first-order leaf values and
    # gains, for curvature-ablation runs.
    first_order: bool = False

    def __post_init__(self):
        if self.max_depth < 1:
            raise DomainError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.min_samples_leaf < 1:
            raise DomainError(f"min_samples_leaf must be >= 1, got {self.min_samples_leaf}")


@dataclass(frozen=True)
class Leaf:
    value: float
    count: int
    g_sum: float
    b_sum: float


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Leaf | Split


def leaf_value(g_sum: float, b_sum: float, alpha: float, n: int, beta: float) -> float:
    """C = -G/(B + alpha*n + beta); the denominator must be positive."""
    denom = b_sum + alpha * n + beta
    if denom <= 0.0:
        raise InfeasibleRadiusError(
            f"leaf denominator {denom!r} not positive; raise alpha or beta"
        )
    return -g_sum / denom


def leaf_objective(g_sum: float, b_sum: float, value: float) -> float:
    """Quadratic model value (1/2)*B*C^2 + G*C at a leaf constant C."""
    return 0.5 * b_sum * value * value + g_sum * value


def _objective_min(g_sum, b_sum, n, alpha, beta, style: str):
    """Vectorised optimal objective of a node under the given gain style.

    "reduction" plugs C = -G/(B+mu) into (1/2)*B*C^2 + G*C; "penalized"
    scores -(1/2)*G^2/(B+mu), the classic second-order GBM gain with the
    shift acting as an L2 penalty.  mu = alpha*n + beta.
    """
    denom = b_sum + alpha * n + beta
    if np.any(denom <= 0.0):
        raise InfeasibleRadiusError("node denominator not positive; raise alpha or beta")
    if style == "penalized":
        return -0.5 * g_sum * g_sum / denom
    return 0.5 * b_sum * g_sum * g_sum / (denom * denom) - g_sum * g_sum / denom


def split_gain(g_l, b_l, n_l, g_r, b_r, n_r, alpha, beta, style: str = "reduction") -> float:
    """Objective drop of splitting a parent into the given children.

    Positive gain means the children's combined optimal objective is lower
    than the parent's.  Symmetric in the two children.
    """
    if style not in GAIN_STYLES:
        raise DomainError(f"unknown gain style {style!r}")
    parent = _objective_min(g_l + g_r, b_l + b_r, n_l + n_r, alpha, beta, style)
    left = _objective_min(g_l, b_l, n_l, alpha, beta, style)
    right = _objective_min(g_r, b_r, n_r, alpha, beta, style)
    return float(parent - (left + right))


def _midpoints(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Midpoints of consecutive distinct values, nudged so value <= t routes left."""
    mid = 0.5 * (lo + hi)
    return np.where(mid >= hi, lo, mid)


def fit_tree(
    features,
    grads,
    quads,
    alpha: float,
    beta: float,
    config: TreeConfig,
    gain_style: str = "reduction",
) -> TreeNode:
    """Exact greedy tree fit on per-instance (g, b) statistics.

    Candidates are midpoints between consecutive distinct sorted values of
    each feature; the best candidate wins with ties broken toward the lowest
    feature index, then the lowest threshold, making the fit deterministic.
    Recursion stops on max_depth, min_samples_leaf, or best gain <= min_gain.
    """
    if gain_style not in GAIN_STYLES:
        raise DomainError(f"unknown gain style {gain_style!r}")
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise DomainError(f"features must be a 2-d matrix, got ndim={X.ndim}")
    n, m = X.shape
    if n < 1 or m < 1:
        raise DomainError("empty feature matrix")
    g = np.asarray(grads, dtype=float)
    b = np.asarray(quads, dtype=float)
    if g.shape != (n,) or b.shape != (n,):
        raise DomainError("gradient/quad vectors must match the number of rows")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(g)) and np.all(np.isfinite(b))):
        raise DomainError("non-finite values in tree inputs")
    if config.first_order:
        b = np.zeros_like(b)
    min_leaf = config.min_samples_leaf

    def build(idx: np.ndarray, depth: int) -> TreeNode:
        count = idx.size
        node_g = g[idx]
        node_b = b[idx]
        g_total = float(node_g.sum())
        b_total = float(node_b.sum())

        def make_leaf() -> Leaf:
            return Leaf(
                value=float(leaf_value(g_total, b_total, alpha, count, beta)),
                count=int(count),
                g_sum=g_total,
                b_sum=b_total,
            )

        if depth >= config.max_depth or count < 2 * min_leaf:
            return make_leaf()

        parent_obj = _objective_min(
            np.float64(g_total), np.float64(b_total), count, alpha, beta, gain_style
        )
        best_gain = -np.inf
        best_feature = -1
        best_threshold = 0.0
        for j in range(m):
            col = X[idx, j]
            order = np.argsort(col, kind="stable")
            sv = col[order]
            if sv[0] == sv[-1]:
                continue
            sg = np.cumsum(node_g[order])
            sb = np.cumsum(node_b[order])
            sizes = np.arange(1, count)
            valid = sv[1:] > sv[:-1]
            if min_leaf > 1:
                valid &= (sizes >= min_leaf) & (count - sizes >= min_leaf)
            pos = np.flatnonzero(valid)
            if pos.size == 0:
                continue
            g_left = sg[pos]
            b_left = sb[pos]
            n_left = pos + 1
            left_obj = _objective_min(g_left, b_left, n_left, alpha, beta, gain_style)
            right_obj = _objective_min(
                g_total - g_left, b_total - b_left, count - n_left, alpha, beta, gain_style
            )
            gains = parent_obj - left_obj - right_obj
            k = int(np.argmax(gains))  # first max -> lowest threshold
            if gains[k] > best_gain:
                best_gain = float(gains[k])
                best_feature = j
                best_threshold = float(_midpoints(sv[pos[k]], sv[pos[k] + 1]))

        if best_feature < 0 or best_gain <= config.min_gain:
            return make_leaf()
        mask = X[idx, best_feature] <= best_threshold
        return Split(
            feature=best_feature,
            threshold=best_threshold,
            left=build(idx[mask], depth + 1),
            right=build(idx[~mask], depth + 1),
        )

    return build(np.arange(n), 0)


def predict_tree(node: TreeNode, row) -> float:
    """Route a single row to its leaf: value <= threshold goes left."""
    x = np.asarray(row, dtype=float)
    if x.ndim != 1:
        raise DomainError("row must be 1-d")
    while isinstance(node, Split):
        if node.feature >= x.shape[0]:
            raise DomainError(
                f"row has {x.shape[0]} features but the tree tests feature {node.feature}"
            )
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.value


def predict_tree_batch(node: TreeNode, features) -> np.ndarray:
    """Leaf values for every row of a matrix."""
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise DomainError("features must be a 2-d matrix")
    out = np.empty(X.shape[0], dtype=float)

    def route(nd: TreeNode, idx: np.ndarray):
        if isinstance(nd, Leaf):
            out[idx] = nd.value
            return
        if nd.feature >= X.shape[1]:
            raise DomainError(
                f"matrix has {X.shape[1]} features but the tree tests feature {nd.feature}"
            )
        mask = X[idx, nd.feature] <= nd.threshold
        route(nd.left, idx[mask])
        route(nd.right, idx[~mask])

    route(node, np.arange(X.shape[0]))
    return out


def scale_leaf_values(node: TreeNode, factor: float) -> TreeNode:
    """New tree with every leaf value multiplied by factor (learning-rate trees)."""
    if isinstance(node, Leaf):
        return Leaf(value=node.value * factor, count=node.count, g_sum=node.g_sum, b_sum=node.b_sum)
    return Split(
        feature=node.feature,
        threshold=node.threshold,
        left=scale_leaf_values(node.left, factor),
        right=scale_leaf_values(node.right, factor),
    )


def tree_to_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {
            "kind": "leaf",
            "value": float(node.value),
            "count": int(node.count),
            "g_sum": float(node.g_sum),
            "b_sum": float(node.b_sum),
        }
    return {
        "kind": "split",
        "feature": int(node.feature),
        "threshold": float(node.threshold),
        "left": tree_to_dict(node.left),
        "right": tree_to_dict(node.right),
    }


def tree_from_dict(record: dict) -> TreeNode:
    kind = record.get("kind")
    if kind == "leaf":
        return Leaf(
            value=float(record["value"]),
            count=int(record["count"]),
            g_sum=float(record["g_sum"]),
            b_sum=float(record["b_sum"]),
        )
    if kind == "split":
        return Split(
            feature=int(record["feature"]),
            threshold=float(record["threshold"]),
            left=tree_from_dict(record["left"]),
            right=tree_from_dict(record["right"]),
        )
    raise DomainError(f"unknown tree node kind {kind!r}")

"""Boosting driver: targets -> learner fit -> ratio -> radius update -> admission.

Each iteration fits a learner to the trust-region targets, tentatively adds
it, measures the approximation ratio, lets the controller react, and only
then decides whether the learner joins the ensemble.  Rejected learners
leave the predictions untouched.  First-order GBM (step -nu*g) and
Newton-style GBM (leaf -nu*G/(B+lambda), which needs b > 0 everywhere) ship
as baselines driven by the same tree machinery.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import DomainError, HessianNotPositiveError, InfeasibleRadiusError
from .learners import LinearLearner, fit_generic, predict_generic_batch
from .losses import ClampConfig, LossKind, grad_quad, loss_value, probability
from .metrics import regression_loss
from .tree import TreeConfig, TreeNode, fit_tree, predict_tree_batch, scale_leaf_values
from .trust import (
    RATIO_KINDS,
    TrustParams,
    TrustState,
    admit,
    ratio_r1,
    ratio_r2,
    target_values,
    update_radius,
)

LEARNER_KINDS = ("tree", "linear")
METHOD_NAMES = ("trboost", "gbdt", "newton")


@dataclass(frozen=True)
class BaselineKind:
    """Method selector: trboost, gbdt (first-order, step -nu*g) or newton
    (second-order, leaf -nu*G/(B+lam))."""

    name: str
    nu: float = 0.1
    lam: float = 1.0

    def __post_init__(self):
        if self.name not in METHOD_NAMES:
            raise DomainError(f"unknown method {self.name!r}, expected one of {METHOD_NAMES}")
        if not (0.0 < self.nu <= 1.0):
            raise DomainError(f"nu must lie in (0, 1], got {self.nu}")
        if self.lam < 0.0:
            raise DomainError(f"lambda must be non-negative, got {self.lam}")


@dataclass(frozen=True)
class BoostConfig:
    loss: LossKind
    n_estimators: int = 100
    trust: TrustParams = field(default_factory=TrustParams)
    alpha0: float = 0.1
    beta0: float = 10.0
    mu0: float = 1.0
    ratio: str = "r1"
    learner: str = "tree"
    tree: TreeConfig = field(default_factory=TreeConfig)
    base_score: float = 0.0
    clamp: ClampConfig = field(default_factory=ClampConfig)
    seed: int = 0
    patience: int = 0

    def __post_init__(self):
        if self.n_estimators < 1:
            raise DomainError(f"n_estimators must be >= 1, got {self.n_estimators}")
        if self.ratio not in RATIO_KINDS:
            raise DomainError(f"ratio must be one of {RATIO_KINDS}, got {self.ratio!r}")
        if self.learner not in LEARNER_KINDS:
            raise DomainError(f"learner must be one of {LEARNER_KINDS}, got {self.learner!r}")
        if self.alpha0 < 0 or self.beta0 < 0 or self.mu0 < 0:
            raise DomainError("alpha0, beta0 and mu0 must be non-negative")
        if self.patience < 0:
            raise DomainError("patience must be non-negative")
        if not np.isfinite(self.base_score):
            raise DomainError("base_score must be finite")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    rho: float | None
    admitted: bool
    mu_or_alpha: float
    beta: float | None
    train_loss: float
    val_metric: float | None = None
    pred_reduction: float | None = None


@dataclass
class Ensemble:
    """Trained model: base score plus the ordered admitted learners."""

    kind: str
    loss: LossKind
    clamp: ClampConfig
    base_score: float
    n_features: int
    learners: list
    log: list[IterationRecord]
    config: dict
    feature_names: list[str] | None = None

    @property
    def admitted_count(self) -> int:
        return len(self.learners)


def _learner_outputs(learner, X: np.ndarray) -> np.ndarray:
    if isinstance(learner, LinearLearner):
        return predict_generic_batch(learner, X)
    return predict_tree_batch(learner, X)


def predict(ensemble: Ensemble, features) -> np.ndarray:
    """Raw scores: base score plus the sum of all admitted learners."""
    X = np.asarray(features, dtype=float)
    if X.ndim != 2:
        raise DomainError("features must be a 2-d matrix")
    if X.shape[1] != ensemble.n_features:
        raise DomainError(
            f"model expects {ensemble.n_features} features, got {X.shape[1]}"
        )
    raw = np.full(X.shape[0], ensemble.base_score, dtype=float)
    for learner in ensemble.learners:
        raw += _learner_outputs(learner, X)
    return raw


def predict_proba(ensemble: Ensemble, features) -> np.ndarray:
    """Class-1 probabilities for classification ensembles."""
    if not ensemble.loss.is_classification:
        raise DomainError("probability output requires a logloss model")
    return np.asarray(probability(predict(ensemble, features)), dtype=float)


def _mean_loss(loss: LossKind, y: np.ndarray, raw: np.ndarray) -> float:
    return float(np.mean(loss_value(loss, y, raw)))


def _validate_labels(loss: LossKind, y: np.ndarray):
    if loss.is_classification and not np.all((y == 0.0) | (y == 1.0)):
        raise DomainError("logloss requires labels in {0, 1}")


def _config_snapshot(config: BoostConfig, kind: str, nu=None, lam=None) -> dict:
    snap = {
        "kind": kind,
        "loss": config.loss.flag(),
        "n_estimators": config.n_estimators,
        "eps1": config.trust.eps1,
        "eps2": config.trust.eps2,
        "gamma": config.trust.gamma,
        "eta": config.trust.eta,
        "mu_max": config.trust.mu_max,
        "alpha0": config.alpha0,
        "beta0": config.beta0,
        "mu0": config.mu0,
        "ratio": config.ratio,
        "learner": config.learner,
        "max_depth": config.tree.max_depth,
        "min_samples_leaf": config.tree.min_samples_leaf,
        "min_gain": config.tree.min_gain,
        "first_order": config.tree.first_order,
        "base_score": config.base_score,
        "clamp_rho": config.clamp.rho,
        "seed": config.seed,
        "patience": config.patience,
    }
    if nu is not None:
        snap["nu"] = nu
    if lam is not None:
        snap["lambda"] = lam
    return snap


def _val_metric(loss: LossKind, y_val, raw_val) -> float:
    return _mean_loss(loss, y_val, raw_val)


def train(data: Dataset, config: BoostConfig, eval_set: Dataset | None = None) -> Ensemble:
    """Run the full trust-region boosting loop.

    Exactly ``n_estimators`` iterations (fewer only when ``patience``
    consecutive rejections trigger early stopping).  The per-iteration log
    keeps the ratio, the admission decision, the controller state and the
    training loss after the iteration.
    """
    X = data.features
    y = data.labels
    _validate_labels(config.loss, y)

    zero_quad_possible = config.loss.can_zero_quad or (
        config.learner == "tree" and config.tree.first_order
    )
    if zero_quad_possible:
        if config.learner == "tree" and config.alpha0 == 0.0 and config.beta0 == 0.0:
            raise DomainError(
                "alpha0 and beta0 cannot both be zero when the quadratic "
                "coefficient can vanish; the leaf denominators would not be positive"
            )
        if config.learner == "linear" and config.mu0 == 0.0:
            raise DomainError(
                "mu0 must be positive when the quadratic coefficient can vanish"
            )

    state = TrustState(mu=config.mu0, alpha=config.alpha0, beta=config.beta0)
    raw = np.full(data.n_rows, config.base_score, dtype=float)
    cur_loss = _mean_loss(config.loss, y, raw)
    raw_val = None
    if eval_set is not None:
        if eval_set.n_features != data.n_features:
            raise DomainError("eval set feature count does not match the training data")
        raw_val = np.full(eval_set.n_rows, config.base_score, dtype=float)

    learners: list = []
    log: list[IterationRecord] = []
    consecutive_rejections = 0

    for t in range(1, config.n_estimators + 1):
        g, b = grad_quad(config.loss, y, raw, config.clamp)
        if config.learner == "tree" and config.tree.first_order:
            b_model = np.zeros_like(b)
        else:
            b_model = b

        if config.learner == "tree":
            try:
                learner = fit_tree(X, g, b_model, state.alpha, state.beta, config.tree)
            except InfeasibleRadiusError:
                state = dataclasses.replace(
                    state,
                    alpha=min(state.alpha * config.trust.gamma, config.trust.mu_max),
                    beta=min(state.beta * config.trust.gamma, config.trust.mu_max),
                )
                learner = fit_tree(X, g, b_model, state.alpha, state.beta, config.tree)
        else:
            try:
                targets = target_values(g, b_model, state.mu)
            except InfeasibleRadiusError:
                state = dataclasses.replace(
                    state, mu=min(state.mu * config.trust.gamma, config.trust.mu_max)
                )
                targets = target_values(g, b_model, state.mu)
            learner = fit_generic(X, targets)

        outputs = _learner_outputs(learner, X)
        new_loss = _mean_loss(config.loss, y, raw + outputs)
        predicted = -float(np.mean(g * outputs + 0.5 * b_model * outputs * outputs))
        if config.ratio == "r1":
            rho = ratio_r1(cur_loss, new_loss, g, b_model, outputs)
        else:
            rho = ratio_r2(cur_loss, new_loss, outputs)
        admitted = admit(rho, config.trust.eta)
        state = update_radius(state, config.trust, rho)

        if admitted:
            raw = raw + outputs
            cur_loss = new_loss
            learners.append(learner)
            if raw_val is not None:
                raw_val += _learner_outputs(learner, eval_set.features)
            consecutive_rejections = 0
        else:
            consecutive_rejections += 1

        log.append(
            IterationRecord(
                iteration=t,
                rho=float(rho),
                admitted=admitted,
                mu_or_alpha=state.alpha if config.learner == "tree" else state.mu,
                beta=state.beta if config.learner == "tree" else None,
                train_loss=cur_loss,
                val_metric=(
                    _val_metric(config.loss, eval_set.labels, raw_val)
                    if raw_val is not None
                    else None
                ),
                pred_reduction=predicted,
            )
        )
        if config.patience and consecutive_rejections >= config.patience:
            break

    return Ensemble(
        kind="trboost",
        loss=config.loss,
        clamp=config.clamp,
        base_score=config.base_score,
        n_features=data.n_features,
        learners=learners,
        log=log,
        config=_config_snapshot(config, "trboost"),
        feature_names=data.feature_names,
    )


def train_baseline(
    data: Dataset,
    kind: BaselineKind,
    config: BoostConfig,
    eval_set: Dataset | None = None,
) -> Ensemble:
    """First-order and Newton-style tree baselines sharing the loss and tree config.

    gbdt fits each tree to the negative gradients by squared-error splitting
    with mean-target leaves scaled by nu.  newton fits the usual second-order
    tree with leaves -nu*G/(B+lambda) and the penalized gain; it refuses to
    run the moment any instance has b <= 0.  Every learner is admitted.
    """
    if kind.name == "trboost":
        return train(data, config, eval_set)
    X = data.features
    y = data.labels
    _validate_labels(config.loss, y)

    raw = np.full(data.n_rows, config.base_score, dtype=float)
    cur_loss = _mean_loss(config.loss, y, raw)
    raw_val = None
    if eval_set is not None:
        if eval_set.n_features != data.n_features:
            raise DomainError("eval set feature count does not match the training data")
        raw_val = np.full(eval_set.n_rows, config.base_score, dtype=float)

    learners: list = []
    log: list[IterationRecord] = []
    for t in range(1, config.n_estimators + 1):
        g, b = grad_quad(config.loss, y, raw, config.clamp)
        if kind.name == "gbdt":
            # Squared-error fit of the targets -g: gradients 2*g and constant
            # curvature 2 give mean-target leaves and variance-gain splits.
            tree = fit_tree(X, 2.0 * g, np.full_like(g, 2.0), 0.0, 0.0, config.tree)
        else:
            if np.any(b <= 0.0):
                raise HessianNotPositiveError(
                    f"Hessian not positive for loss {config.loss.flag()!r}: "
                    "the newton baseline needs b > 0 for every instance"
                )
            tree = fit_tree(X, g, b, 0.0, kind.lam, config.tree, gain_style="penalized")
        if kind.nu != 1.0:
            tree = scale_leaf_values(tree, kind.nu)
        outputs = predict_tree_batch(tree, X)
        raw = raw + outputs
        cur_loss = _mean_loss(config.loss, y, raw)
        learners.append(tree)
        if raw_val is not None:
            raw_val += predict_tree_batch(tree, eval_set.features)
        log.append(
            IterationRecord(
                iteration=t,
                rho=None,
                admitted=True,
                mu_or_alpha=0.0,
                beta=kind.lam if kind.name == "newton" else 0.0,
                train_loss=cur_loss,
                val_metric=(
                    _val_metric(config.loss, eval_set.labels, raw_val)
                    if raw_val is not None
                    else None
                ),
                pred_reduction=None,
            )
        )

    return Ensemble(
        kind=kind.name,
        loss=config.loss,
        clamp=config.clamp,
        base_score=config.base_score,
        n_features=data.n_features,
        learners=learners,
        log=log,
        config=_config_snapshot(config, kind.name, nu=kind.nu, lam=kind.lam),
        feature_names=data.feature_names,
    )


def evaluate_ensemble(ensemble: Ensemble, data: Dataset) -> "EvalReport":
    """Metric table for a trained model, with the training-time curve attached."""
    from .metrics import EvalReport, auc, f1

    raw = predict(ensemble, data.features)
    values = {"loss": regression_loss(ensemble.loss, raw, data.labels)}
    if ensemble.loss.is_classification:
        proba = np.asarray(probability(raw), dtype=float)
        values["auc"] = auc(proba, data.labels)
        values["f1"] = f1(proba, data.labels)
    curve = [(rec.iteration, rec.train_loss) for rec in ensemble.log]
    return EvalReport(values=values, curve=curve)

"""trustboost: gradient boosting with trust-region step control.

Each boosting iteration solves per-instance constrained quadratic
subproblems whose closed-form solution is the shifted Newton step
z = -g/(b + mu); an adaptive controller steers the shift from the ratio of
realised to predicted loss reduction and gates which learners enter the
ensemble.  Because steps stay bounded even when the quadratic coefficient
vanishes or goes negative, the same engine trains absolute and Huber losses
that pure second-order boosting cannot touch.  First-order and Newton-style
tree baselines, evaluation metrics, dataset tooling, a convergence-rate lab
and a CLI round out the package.
"""

from .boosting import (
    BaselineKind,
    BoostConfig,
    Ensemble,
    IterationRecord,
    evaluate_ensemble,
    predict,
    predict_proba,
    train,
    train_baseline,
)
from .convergence import (
    AppendixReport,
    LossTrace,
    RateCheck,
    check_appendix_inequalities,
    check_linear,
    check_sublinear,
    run_one_instance,
)
from .data import (
    Dataset,
    gen_noisy_regression,
    gen_two_gaussians,
    holdout,
    load_csv,
    load_matrix_csv,
    save_csv,
    split,
)
from .errors import (
    BoostError,
    DataIOError,
    DomainError,
    HessianNotPositiveError,
    InfeasibleRadiusError,
    SchemaError,
    UndefinedMetricError,
)
from .learners import LinearLearner, fit_generic, predict_generic, predict_generic_batch
from .losses import ClampConfig, LossKind, clamp_probability, grad_quad, loss_value, probability
from .metrics import EvalReport, auc, f1, regression_loss
from .serialize import MODEL_FORMAT_VERSION, load_model, model_from_dict, model_to_dict, save_model
from .tree import (
    Leaf,
    Split,
    TreeConfig,
    TreeNode,
    fit_tree,
    leaf_objective,
    leaf_value,
    predict_tree,
    predict_tree_batch,
    split_gain,
)
from .trust import (
    TrustParams,
    TrustState,
    admit,
    ratio_r1,
    ratio_r2,
    solve_scalar_subproblem,
    target_values,
    update_radius,
)

__version__ = "1.0.0"


def version() -> str:
    """Semantic version of the library; its major equals the model format version."""
    return __version__


__all__ = [
    "AppendixReport",
    "BaselineKind",
    "BoostConfig",
    "BoostError",
    "ClampConfig",
    "DataIOError",
    "Dataset",
    "DomainError",
    "Ensemble",
    "EvalReport",
    "HessianNotPositiveError",
    "InfeasibleRadiusError",
    "IterationRecord",
    "Leaf",
    "LinearLearner",
    "LossKind",
    "LossTrace",
    "MODEL_FORMAT_VERSION",
    "RateCheck",
    "SchemaError",
    "Split",
    "TreeConfig",
    "TreeNode",
    "TrustParams",
    "TrustState",
    "UndefinedMetricError",
    "admit",
    "auc",
    "check_appendix_inequalities",
    "check_linear",
    "check_sublinear",
    "clamp_probability",
    "evaluate_ensemble",
    "f1",
    "fit_generic",
    "fit_tree",
    "gen_noisy_regression",
    "gen_two_gaussians",
    "grad_quad",
    "holdout",
    "leaf_objective",
    "leaf_value",
    "load_csv",
    "load_matrix_csv",
    "load_model",
    "loss_value",
    "model_from_dict",
    "model_to_dict",
    "predict",
    "predict_generic",
    "predict_generic_batch",
    "predict_proba",
    "predict_tree",
    "predict_tree_batch",
    "probability",
    "ratio_r1",
    "ratio_r2",
    "regression_loss",
    "run_one_instance",
    "save_csv",
    "save_model",
    "solve_scalar_subproblem",
    "split",
    "split_gain",
    "target_values",
    "train",
    "train_baseline",
    "update_radius",
    "version",
]

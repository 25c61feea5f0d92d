"""Command-line front end: train, predict, evaluate, grid, generate, converge.

Exit codes: 0 success, 2 usage error, 3 data error, 4 numeric infeasibility.
Curve CSVs use the schema iteration,train_loss,val_metric,rho,admitted,
mu_or_alpha,beta; a rendered figure is written next to every curve file.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import os
import sys

from . import __version__
from .boosting import (
    BaselineKind,
    BoostConfig,
    Ensemble,
    evaluate_ensemble,
    predict,
    predict_proba,
    train,
    train_baseline,
)
from .convergence import check_appendix_inequalities, check_linear, check_sublinear, run_one_instance
from .data import (
    Dataset,
    gen_noisy_regression,
    gen_two_gaussians,
    holdout,
    load_csv,
    load_matrix_csv,
    save_csv,
)
from .errors import (
    BoostError,
    DomainError,
    HessianNotPositiveError,
    InfeasibleRadiusError,
    SchemaError,
)
from .losses import ClampConfig, LossKind
from .serialize import load_model, save_model
from .tree import TreeConfig
from .trust import TrustParams

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _add_data_flags(p: argparse.ArgumentParser, label_required: bool = True):
    p.add_argument("--data", required=True, help="input CSV file")
    p.add_argument("--label", required=label_required, default=None,
                   help="label column name or 0-based index")
    p.add_argument("--no-header", action="store_true", help="CSV has no header row")


def _add_model_flags(p: argparse.ArgumentParser, grid: bool = False):
    p.add_argument("--loss", default="l2", help="logloss | l2 | l1 | huber:<delta>")
    p.add_argument("--learner", choices=("tree", "linear"), default="tree")
    if grid:
        # Grid-able flags take value lists and are searched exhaustively.
        p.add_argument("--estimators", type=int, nargs="+", default=[100])
        p.add_argument("--alpha", type=float, nargs="+", default=[0.1])
        p.add_argument("--beta", type=float, nargs="+", default=[10.0])
        p.add_argument("--mu", type=float, nargs="+", default=[1.0])
        p.add_argument("--eta", type=float, nargs="+", default=[0.0])
    else:
        p.add_argument("--estimators", type=int, default=100)
        p.add_argument("--alpha", type=float, default=0.1, help="per-leaf shift slope alpha")
        p.add_argument("--beta", type=float, default=10.0, help="per-leaf shift offset beta")
        p.add_argument("--mu", type=float, default=1.0, help="initial shift for generic learners")
        p.add_argument("--eta", type=float, default=0.0, help="admission threshold")
    p.add_argument("--gamma", type=float, default=1.01, help="radius shrink factor")
    p.add_argument("--eps1", type=float, default=0.9)
    p.add_argument("--eps2", type=float, default=1.1)
    p.add_argument("--mu-max", type=float, default=1e6)
    p.add_argument("--ratio", choices=("r1", "r2"), default="r1")
    p.add_argument("--max-depth", type=int, default=6)
    p.add_argument("--min-leaf", type=int, default=1)
    p.add_argument("--min-gain", type=float, default=0.0)
    p.add_argument("--first-order", action="store_true",
                   help="zero the quadratic coefficients (curvature ablation)")
    p.add_argument("--base-score", type=float, default=0.0)
    p.add_argument("--clamp-rho", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--patience", type=int, default=0,
                   help="stop after this many consecutive rejections (0 = off)")


def _config_from_args(args, n_estimators=None, alpha=None, beta=None, mu=None, eta=None) -> BoostConfig:
    return BoostConfig(
        loss=LossKind.parse(args.loss),
        n_estimators=args.estimators if n_estimators is None else n_estimators,
        trust=TrustParams(
            eps1=args.eps1,
            eps2=args.eps2,
            gamma=args.gamma,
            eta=args.eta if eta is None else eta,
            mu_max=args.mu_max,
        ),
        alpha0=args.alpha if alpha is None else alpha,
        beta0=args.beta if beta is None else beta,
        mu0=args.mu if mu is None else mu,
        ratio=args.ratio,
        learner=args.learner,
        tree=TreeConfig(
            max_depth=args.max_depth,
            min_samples_leaf=args.min_leaf,
            min_gain=args.min_gain,
            first_order=args.first_order,
        ),
        base_score=args.base_score,
        clamp=ClampConfig(rho=args.clamp_rho),
        seed=args.seed,
        patience=args.patience,
    )


def _write_curves(ensemble: Ensemble, path: str):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["iteration", "train_loss", "val_metric", "rho", "admitted", "mu_or_alpha", "beta"]
        )
        for rec in ensemble.log:
            writer.writerow(
                [
                    rec.iteration,
                    _fmt(rec.train_loss),
                    _fmt(rec.val_metric),
                    _fmt(rec.rho),
                    _fmt(rec.admitted),
                    _fmt(rec.mu_or_alpha),
                    _fmt(rec.beta),
                ]
            )
    from .plots import render_training_curves

    figure = os.path.splitext(path)[0] + ".png"
    eps1 = ensemble.config.get("eps1")
    eps2 = ensemble.config.get("eps2")
    render_training_curves(ensemble.log, figure, eps1=eps1, eps2=eps2,
                           title=f"{ensemble.kind} / {ensemble.loss.flag()}")


def _load_dataset(args) -> Dataset:
    return load_csv(args.data, args.label, has_header=not args.no_header)


def cmd_train(args) -> int:
    data = _load_dataset(args)
    eval_set = None
    train_part = data
    if args.val_data:
        eval_set = load_csv(args.val_data, args.label, has_header=not args.no_header)
    elif args.val_fraction > 0:
        train_part, eval_set = holdout(data, args.val_fraction, args.seed)
    config = _config_from_args(args)
    kind = BaselineKind(args.baseline, nu=args.nu, lam=getattr(args, "lam"))
    ensemble = train_baseline(train_part, kind, config, eval_set=eval_set)
    save_model(ensemble, args.out)
    if args.curves_out:
        _write_curves(ensemble, args.curves_out)
    print(f"trained {ensemble.kind} ({config.loss.flag()}): "
          f"{len(ensemble.log)} iterations, {ensemble.admitted_count} admitted")
    print(f"final train loss: {_fmt(ensemble.log[-1].train_loss)}")
    if ensemble.log[-1].val_metric is not None:
        print(f"final val loss: {_fmt(ensemble.log[-1].val_metric)}")
    print(f"model written to {args.out}")
    if args.test_data:
        test = load_csv(args.test_data, args.label, has_header=not args.no_header)
        for name, value in evaluate_ensemble(ensemble, test).values.items():
            print(f"test {name}: {_fmt(value)}")
    return EXIT_OK


def _load_features(args, model: Ensemble):
    if args.label is not None:
        data = load_csv(args.data, args.label, has_header=not args.no_header)
        X, y = data.features, data.labels
    else:
        X, _ = load_matrix_csv(args.data, has_header=not args.no_header)
        y = None
    if X.shape[1] != model.n_features:
        raise SchemaError(
            f"model expects {model.n_features} features, data has {X.shape[1]}"
        )
    return X, y


def cmd_predict(args) -> int:
    model = load_model(args.model)
    X, _ = _load_features(args, model)
    if args.proba:
        values = predict_proba(model, X)
    else:
        values = predict(model, X)
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="", encoding="utf-8")
    try:
        writer = csv.writer(out)
        writer.writerow(["prediction"])
        for v in values:
            writer.writerow([_fmt(float(v))])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    data = _load_dataset(args)
    if data.n_features != model.n_features:
        raise SchemaError(
            f"model expects {model.n_features} features, data has {data.n_features}"
        )
    values = evaluate_ensemble(model, data).values
    for name, value in values.items():
        print(f"{name},{_fmt(value)}")
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "metric", "value"])
            for name, value in values.items():
                writer.writerow([model.admitted_count, name, _fmt(value)])
    return EXIT_OK


def cmd_grid(args) -> int:
    data = _load_dataset(args)
    train_part, val_part = holdout(data, args.val_fraction, args.seed)
    # Lexicographic flag order fixes the deterministic tie-break.
    grid_axes = [
        ("alpha", args.alpha),
        ("beta", args.beta),
        ("estimators", args.estimators),
        ("eta", args.eta),
        ("mu", args.mu),
    ]
    for name, values in grid_axes:
        if not values:
            raise DomainError(f"empty grid for --{name}")
    best_combo = None
    best_score = None
    for combo in itertools.product(*(values for _, values in grid_axes)):
        alpha, beta, estimators, eta, mu = combo
        config = _config_from_args(
            args, n_estimators=int(estimators), alpha=alpha, beta=beta, mu=mu, eta=eta
        )
        ensemble = train(train_part, config, eval_set=val_part)
        score = ensemble.log[-1].val_metric
        print(
            f"grid alpha={_fmt(alpha)} beta={_fmt(beta)} estimators={estimators} "
            f"eta={_fmt(eta)} mu={_fmt(mu)} val_loss={_fmt(score)}"
        )
        if best_score is None or score < best_score:
            best_score = score
            best_combo = combo
    alpha, beta, estimators, eta, mu = best_combo
    print(
        f"best alpha={_fmt(alpha)} beta={_fmt(beta)} estimators={estimators} "
        f"eta={_fmt(eta)} mu={_fmt(mu)} val_loss={_fmt(best_score)}"
    )
    config = _config_from_args(
        args, n_estimators=int(estimators), alpha=alpha, beta=beta, mu=mu, eta=eta
    )
    final = train(data, config)
    save_model(final, args.out)
    print(f"winner retrained on train+val; model written to {args.out}")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.generator == "two-gaussians":
        data = gen_two_gaussians(args.n, args.dims, args.separation, args.seed)
    else:
        data = gen_noisy_regression(
            args.n, args.dims, args.outlier_fraction, args.outlier_scale, args.seed
        )
    save_csv(data, args.out)
    print(f"wrote {data.n_rows} rows x {data.n_features} features to {args.out}")
    return EXIT_OK


def cmd_converge(args) -> int:
    loss = LossKind.parse(args.loss)
    method = BaselineKind(args.method, nu=args.nu, lam=1.0)
    trace = run_one_instance(
        loss,
        args.y,
        args.f0,
        method,
        args.iters,
        mu=args.mu,
        clamp=ClampConfig(rho=args.clamp_rho),
    )
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "loss"])
            for i, value in enumerate(trace.losses):
                writer.writerow([i, _fmt(float(value))])
        from .plots import render_trace

        render_trace(trace.losses, os.path.splitext(args.out)[0] + ".png",
                     title=f"{args.method} / {loss.flag()}")
        print(f"trace written to {args.out}")
    print(f"sublinear-recurrence: {check_sublinear(trace).summary()}")
    print(f"linear-recurrence: {check_linear(trace).summary()}")
    if args.appendix:
        report = check_appendix_inequalities(
            ClampConfig(rho=args.clamp_rho), n_points=args.grid_points
        )
        for line in report.summary_lines():
            print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trustboost",
        description="Gradient boosting with trust-region step control.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model and write it to disk")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--baseline", choices=("trboost", "gbdt", "newton"), default="trboost")
    p.add_argument("--nu", type=float, default=0.1, help="baseline learning rate")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="newton baseline leaf penalty")
    p.add_argument("--val-fraction", type=float, default=0.2,
                   help="seeded validation holdout fraction (0 disables)")
    p.add_argument("--val-data", default=None, help="explicit validation CSV")
    p.add_argument("--test-data", default=None, help="evaluate on this CSV after training")
    p.add_argument("--out", default="model.json")
    p.add_argument("--curves-out", default=None, help="per-iteration curves CSV (+ figure)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write one prediction per input row")
    p.add_argument("--model", required=True)
    _add_data_flags(p, label_required=False)
    p.add_argument("--proba", action="store_true", help="emit probabilities (logloss models)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="print a metric table for a model on labelled data")
    p.add_argument("--model", required=True)
    _add_data_flags(p)
    p.add_argument("--out", default=None, help="also write iteration,metric,value CSV")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid", help="exhaustive search over flag value lists")
    _add_data_flags(p)
    _add_model_flags(p, grid=True)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--out", default="model.json")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("generate", help="write a synthetic dataset CSV")
    p.add_argument("generator", choices=("two-gaussians", "noisy-regression"))
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--dims", type=int, default=5)
    p.add_argument("--separation", type=float, default=3.0)
    p.add_argument("--outlier-fraction", type=float, default=0.1)
    p.add_argument("--outlier-scale", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("converge", help="one-instance rate experiments and inequality checks")
    p.add_argument("--loss", default="logloss")
    p.add_argument("--method", choices=("trboost", "gbdt", "newton"), default="trboost")
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--f0", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=1.0, help="frozen trust-region shift")
    p.add_argument("--nu", type=float, default=0.1)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--clamp-rho", type=float, default=1e-4)
    p.add_argument("--appendix", action="store_true",
                   help="also run the clamped-logistic inequality checks")
    p.add_argument("--grid-points", type=int, default=10000)
    p.add_argument("--out", default=None, help="trace CSV (+ figure)")
    p.set_defaults(func=cmd_converge)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except (HessianNotPositiveError, InfeasibleRadiusError) as exc:
        print(f"error [{exc.tag}]: {exc.message}", file=sys.stderr)
        return EXIT_NUMERIC
    except BoostError as exc:
        print(f"error [{exc.tag}]: {exc.message}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

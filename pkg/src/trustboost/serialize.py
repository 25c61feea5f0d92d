"""Text model files: JSON with shortest round-trip float serialization.

Deserialize(Serialize(m)) reproduces predictions bit-exactly because every
float is written with Python's repr (exact for 64-bit values) and read back
verbatim.  The format is versioned; the major package version must match.
"""

from __future__ import annotations

import json
import os

from .boosting import Ensemble, IterationRecord
from .errors import DataIOError, SchemaError
from .learners import LinearLearner, learner_from_dict, learner_to_dict
from .losses import ClampConfig, LossKind
from .tree import tree_from_dict, tree_to_dict

MODEL_FORMAT_VERSION = 1


def _record_to_dict(rec: IterationRecord) -> dict:
    return {
        "iteration": rec.iteration,
        "rho": None if rec.rho is None else float(rec.rho),
        "admitted": bool(rec.admitted),
        "mu_or_alpha": float(rec.mu_or_alpha),
        "beta": None if rec.beta is None else float(rec.beta),
        "train_loss": float(rec.train_loss),
        "val_metric": None if rec.val_metric is None else float(rec.val_metric),
        "pred_reduction": None if rec.pred_reduction is None else float(rec.pred_reduction),
    }


def _record_from_dict(d: dict) -> IterationRecord:
    return IterationRecord(
        iteration=int(d["iteration"]),
        rho=d["rho"],
        admitted=bool(d["admitted"]),
        mu_or_alpha=float(d["mu_or_alpha"]),
        beta=d["beta"],
        train_loss=float(d["train_loss"]),
        val_metric=d.get("val_metric"),
        pred_reduction=d.get("pred_reduction"),
    )


def model_to_dict(ensemble: Ensemble) -> dict:
    learners = []
    for learner in ensemble.learners:
        if isinstance(learner, LinearLearner):
            learners.append(learner_to_dict(learner))
        else:
            learners.append({"type": "tree", "root": tree_to_dict(learner)})
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": ensemble.kind,
        "loss": ensemble.loss.flag(),
        "clamp_rho": float(ensemble.clamp.rho),
        "base_score": float(ensemble.base_score),
        "n_features": int(ensemble.n_features),
        "feature_names": ensemble.feature_names,
        "config": ensemble.config,
        "learners": learners,
        "log": [_record_to_dict(rec) for rec in ensemble.log],
    }


def model_from_dict(payload: dict) -> Ensemble:
    try:
        version = int(payload["format_version"])
        if version != MODEL_FORMAT_VERSION:
            raise SchemaError(
                f"model format_version {version} not supported "
                f"(this build reads version {MODEL_FORMAT_VERSION})"
            )
        learners = []
        for record in payload["learners"]:
            if record["type"] == "tree":
                learners.append(tree_from_dict(record["root"]))
            elif record["type"] == "linear":
                learners.append(learner_from_dict(record))
            else:
                raise SchemaError(f"unknown learner type {record['type']!r}")
        return Ensemble(
            kind=payload["kind"],
            loss=LossKind.parse(payload["loss"]),
            clamp=ClampConfig(rho=float(payload["clamp_rho"])),
            base_score=float(payload["base_score"]),
            n_features=int(payload["n_features"]),
            learners=learners,
            log=[_record_from_dict(d) for d in payload.get("log", [])],
            config=payload.get("config", {}),
            feature_names=payload.get("feature_names"),
        )
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed model file: {exc}") from exc


def save_model(ensemble: Ensemble, path: str):
    payload = model_to_dict(ensemble)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
    except OSError as exc:
        raise DataIOError(f"cannot write {path}: {exc}") from exc


def load_model(path: str) -> Ensemble:
    if not os.path.exists(path):
        raise DataIOError(f"no such file: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise DataIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(payload)

import json

import numpy as np
import pytest

import trustboost
from trustboost import (
    BoostConfig,
    LossKind,
    SchemaError,
    gen_noisy_regression,
    gen_two_gaussians,
    load_model,
    predict,
    save_model,
    train,
)
from trustboost.errors import DataIOError
from trustboost.serialize import MODEL_FORMAT_VERSION, model_from_dict, model_to_dict


def small_model(learner="tree"):
    data = gen_two_gaussians(60, 3, 2.0, seed=1)
    cfg = BoostConfig(loss=LossKind.logistic(), n_estimators=6, learner=learner)
    return train(data, cfg), data


def test_round_trip_predictions_bit_exact(tmp_path):
    for learner in ("tree", "linear"):
        ens, data = small_model(learner)
        path = tmp_path / f"m_{learner}.json"
        save_model(ens, str(path))
        clone = load_model(str(path))
        np.testing.assert_array_equal(
            predict(ens, data.features), predict(clone, data.features)
        )
        assert clone.loss == ens.loss
        assert clone.base_score == ens.base_score
        assert len(clone.log) == len(ens.log)


def test_save_is_deterministic(tmp_path):
    data = gen_noisy_regression(50, 2, 0.0, 0.0, seed=2)
    cfg = BoostConfig(loss=LossKind.squared(), n_estimators=4)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(train(data, cfg), str(p1))
    save_model(train(data, cfg), str(p2))
    assert p1.read_bytes() == p2.read_bytes()


def test_format_version_matches_package_major():
    assert MODEL_FORMAT_VERSION == int(trustboost.version().split(".")[0])
    ens, _ = small_model()
    assert model_to_dict(ens)["format_version"] == MODEL_FORMAT_VERSION


def test_version_stable_and_nonempty():
    assert trustboost.version()
    assert trustboost.version() == trustboost.version()


def test_unsupported_version_rejected():
    ens, _ = small_model()
    payload = model_to_dict(ens)
    payload["format_version"] = 999
    with pytest.raises(SchemaError):
        model_from_dict(payload)


def test_malformed_payload_rejected():
    with pytest.raises(SchemaError):
        model_from_dict({"format_version": MODEL_FORMAT_VERSION})


def test_corrupt_file_and_missing_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SchemaError):
        load_model(str(path))
    with pytest.raises(DataIOError):
        load_model(str(tmp_path / "absent.json"))


def test_json_floats_round_trip(tmp_path):
    # awkward values: negative zero, tiny, huge, many digits
    values = [-0.0, 5e-324, 1.7976931348623157e308, 0.1 + 0.2, np.pi]
    text = json.dumps(values)
    assert json.loads(text) == values

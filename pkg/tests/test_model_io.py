import json

import pytest

from geocmd.datagen import generate
from geocmd.forest import predict_forest_query, train_forest
from geocmd.model_io import CorruptModel, VersionMismatch, load_model, save_model
from geocmd.svm import predict_svm_query, train_svm


@pytest.fixture(scope="module")
def small_corpus():
    return generate(seed=8, per_function=10)


@pytest.fixture(scope="module")
def svm_model(small_corpus):
    return train_svm(small_corpus, seed=1)


@pytest.fixture(scope="module")
def rf_model(small_corpus):
    return train_forest(small_corpus, n_trees=5, seed=1)


def test_svm_round_trip_predictions(tmp_path, small_corpus, svm_model):
    path = tmp_path / "svm.model.json"
    save_model(svm_model, path)
    loaded = load_model(path)
    queries = [s.query for s in generate(seed=99, per_function=10)]
    assert len(queries) == 100
    for q in queries:
        assert predict_svm_query(loaded, q) == predict_svm_query(svm_model, q)


def test_rf_round_trip_predictions(tmp_path, small_corpus, rf_model):
    path = tmp_path / "rf.model.json"
    save_model(rf_model, path)
    loaded = load_model(path)
    queries = [s.query for s in generate(seed=98, per_function=10)]
    for q in queries:
        assert predict_forest_query(loaded, q) == predict_forest_query(rf_model, q)


def test_save_is_byte_deterministic(tmp_path, svm_model):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(svm_model, p1)
    save_model(svm_model, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_header_fields(tmp_path, svm_model, rf_model):
    p = tmp_path / "m.json"
    save_model(svm_model, p)
    payload = json.loads(p.read_text())
    assert payload["format_version"] == 1
    assert payload["kind"] == "svm"
    assert set(payload) >= {"classes", "vocabulary", "hyperparameters", "weights", "biases"}
    save_model(rf_model, p)
    payload = json.loads(p.read_text())
    assert payload["kind"] == "rf"
    assert payload["hyperparameters"]["n_trees"] == 5
    assert payload["hyperparameters"]["max_features"] == "sqrt"


def test_truncated_file_is_corrupt(tmp_path, svm_model):
    path = tmp_path / "svm.model.json"
    save_model(svm_model, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 2])
    with pytest.raises(CorruptModel):
        load_model(path)


def test_wrong_version_tag(tmp_path, svm_model):
    path = tmp_path / "svm.model.json"
    save_model(svm_model, path)
    payload = json.loads(path.read_text())
    payload["format_version"] = 2
    path.write_text(json.dumps(payload))
    with pytest.raises(VersionMismatch):
        load_model(path)


def test_unknown_kind_is_corrupt(tmp_path, svm_model):
    path = tmp_path / "svm.model.json"
    save_model(svm_model, path)
    payload = json.loads(path.read_text())
    payload["kind"] = "mystery"
    path.write_text(json.dumps(payload))
    with pytest.raises(CorruptModel):
        load_model(path)


def test_missing_body_is_corrupt(tmp_path, svm_model):
    path = tmp_path / "svm.model.json"
    save_model(svm_model, path)
    payload = json.loads(path.read_text())
    del payload["weights"]
    path.write_text(json.dumps(payload))
    with pytest.raises(CorruptModel):
        load_model(path)

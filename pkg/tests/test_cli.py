import json

import pytest

from geocmd.cli import main
from geocmd.datagen import load_jsonl
from geocmd.llm import API_KEY_ENV
from geocmd.records import load_predictions


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def pipeline_dir(tmp_path):
    """Dataset + split, shared by the command tests (small for speed)."""
    data = tmp_path / "data.jsonl"
    assert main(["generate", "--seed", "1", "--per-function", "12", "--out", str(data)]) == 0
    assert main(["split", "--in", str(data), "--seed", "1", "--out-dir", str(tmp_path)]) == 0
    return tmp_path


def test_generate_writes_valid_dataset(tmp_path):
    out = tmp_path / "data.jsonl"
    assert main(["generate", "--seed", "3", "--per-function", "5", "--out", str(out)]) == 0
    assert len(load_jsonl(out)) == 50


def test_split_partitions(pipeline_dir):
    train = load_jsonl(pipeline_dir / "train.jsonl")
    val = load_jsonl(pipeline_dir / "val.jsonl")
    test = load_jsonl(pipeline_dir / "test.jsonl")
    assert (len(train), len(val), len(test)) == (96, 12, 12)


def test_full_offline_pipeline_no_network(pipeline_dir, capsys):
    model = pipeline_dir / "svm.model.json"
    preds = pipeline_dir / "preds.jsonl"
    report_csv = pipeline_dir / "report.csv"
    code, _, err = _run(
        capsys, "train", "--model", "svm",
        "--in", str(pipeline_dir / "train.jsonl"), "--seed", "1", "--out", str(model),
    )
    assert code == 0, err
    code, _, err = _run(
        capsys, "predict", "--system", "svm", "--model", str(model),
        "--in", str(pipeline_dir / "test.jsonl"), "--out", str(preds),
    )
    assert code == 0, err
    code, _, err = _run(capsys, "evaluate", "--preds", str(preds), "--out", str(report_csv))
    assert code == 0, err
    text = report_csv.read_text()
    assert text.startswith("system,kind,n,")
    assert "svm,classification," in text


def test_rules_predict_and_report(pipeline_dir, capsys):
    preds = pipeline_dir / "rules.jsonl"
    report_csv = pipeline_dir / "report.csv"
    assert main(["predict", "--system", "rules",
                 "--in", str(pipeline_dir / "test.jsonl"), "--out", str(preds)]) == 0
    records = load_predictions(preds)
    assert all(r.prediction == r.reference for r in records)
    assert main(["evaluate", "--preds", str(preds), "--out", str(report_csv)]) == 0
    code, out, _ = _run(capsys, "report", "--in", str(report_csv), "--format", "md")
    assert code == 0
    assert out.startswith("| System | Kind | n | EMA |")
    assert "| rules | generation |" in out


def test_predict_llm_without_key_is_clean_auth_error(pipeline_dir, capsys, monkeypatch):
    monkeypatch.delenv(API_KEY_ENV, raising=False)
    code, _, err = _run(
        capsys, "predict", "--system", "llm", "--endpoint", "https://example.test",
        "--in", str(pipeline_dir / "test.jsonl"), "--out", str(pipeline_dir / "x.jsonl"),
    )
    assert code != 0
    payload = json.loads(err.strip())
    assert payload["error"] == "AuthError"
    assert API_KEY_ENV in payload["message"]


def test_evaluate_is_byte_deterministic(pipeline_dir):
    preds = pipeline_dir / "rules.jsonl"
    main(["predict", "--system", "rules",
          "--in", str(pipeline_dir / "test.jsonl"), "--out", str(preds)])
    r1 = pipeline_dir / "r1.csv"
    r2 = pipeline_dir / "r2.csv"
    assert main(["evaluate", "--preds", str(preds), "--out", str(r1)]) == 0
    assert main(["evaluate", "--preds", str(preds), "--out", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()


def test_train_rejects_missing_file(tmp_path, capsys):
    code, _, err = _run(
        capsys, "train", "--model", "svm",
        "--in", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "m.json"),
    )
    assert code != 0
    payload = json.loads(err.strip())
    assert "error" in payload and "message" in payload


def test_predict_classifier_requires_model(pipeline_dir, capsys):
    code, _, err = _run(
        capsys, "predict", "--system", "rf",
        "--in", str(pipeline_dir / "test.jsonl"), "--out", str(pipeline_dir / "x.jsonl"),
    )
    assert code != 0
    assert json.loads(err.strip())["error"] == "ValueError"

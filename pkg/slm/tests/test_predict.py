import json
import subprocess
import sys

from geocmd.records import load_predictions
from geoslm.predict import predict_file


def test_predictions_conform_to_harness_contract(smoke_run, tmp_path):
    dataset, result = smoke_run
    out = tmp_path / "preds.jsonl"
    rows = predict_file(result.checkpoint_path, dataset / "test.jsonl", out)
    records = load_predictions(out)  # strict loader raises on any violation
    assert len(records) == len(rows)
    assert all(r.kind == "generation" for r in records)
    assert all(not r.failed for r in records)
    assert [r.id for r in records] == [row["id"] for row in rows]


def test_predictions_feed_the_evaluation_pipeline(smoke_run, tmp_path):
    dataset, result = smoke_run
    preds = tmp_path / "preds.jsonl"
    report = tmp_path / "report.csv"
    predict_file(result.checkpoint_path, dataset / "test.jsonl", preds)
    subprocess.run(
        [sys.executable, "-m", "geocmd.cli", "evaluate",
         "--preds", str(preds), "--out", str(report)],
        check=True, capture_output=True,
    )
    text = report.read_text()
    assert text.startswith("system,kind,n,")
    row = text.strip().split("\n")[1].split(",")
    assert row[0] == "slm" and row[1] == "generation"
    # Generation rows carry the string metrics, never the classifier ones.
    assert row[3] != "-" and row[7] == "-"


def test_cli_round_trip(smoke_run, tmp_path):
    dataset, result = smoke_run
    out = tmp_path / "preds.jsonl"
    proc = subprocess.run(
        [sys.executable, "-m", "geoslm.cli", "predict",
         "--checkpoint", str(result.checkpoint_path),
         "--in", str(dataset / "test.jsonl"), "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    summary = json.loads(proc.stdout)
    assert summary["written"] == 50
    assert load_predictions(out)

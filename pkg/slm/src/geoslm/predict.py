"""Greedy inference over a dataset file, emitting harness predictions."""

from __future__ import annotations

from pathlib import Path

from geoslm.data import load_examples, write_predictions
from geoslm.train import decode_batch, load_checkpoint


def predict_file(
    checkpoint_path: str | Path, dataset_path: str | Path, out_path: str | Path
) -> list[dict]:
    """Translate every example and write predictions JSONL (system="slm")."""
    model, tokenizer, _ = load_checkpoint(checkpoint_path)
    examples = load_examples(dataset_path)
    predictions = decode_batch(model, tokenizer, [e.query for e in examples])
    rows = [
        {
            "id": e.id,
            "system": "slm",
            "kind": "generation",
            "query": e.query,
            "reference": e.call,
            "prediction": prediction,
            "failed": False,
        }
        for e, prediction in zip(examples, predictions)
    ]
    write_predictions(rows, out_path)
    return rows

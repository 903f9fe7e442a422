"""Prediction records: the file contract between translators and evaluation.

Every system (built-in or external) participates in scoring by producing
these records, one JSON object per line. Generation systems put a call
string in ``prediction``; classification systems put a function label.
``kind`` decides which metric family applies downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

KINDS = ("generation", "classification")


class MalformedPrediction(ValueError):
    """A predictions line is not a valid record; carries the line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PredictionRecord:
    id: int
    system: str
    kind: str
    query: str
    reference: str
    prediction: str
    failed: bool = False
    error: Optional[str] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")


def save_predictions(records: Iterable[PredictionRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(prediction_line(record))
            fh.write("\n")


def prediction_line(record: PredictionRecord) -> str:
    payload = {
        "id": record.id,
        "system": record.system,
        "kind": record.kind,
        "query": record.query,
        "reference": record.reference,
        "prediction": record.prediction,
        "failed": record.failed,
    }
    if record.error is not None:
        payload["error"] = record.error
    return json.dumps(payload, ensure_ascii=True, separators=(",", ":"))


def load_predictions(path: str | Path) -> list[PredictionRecord]:
    records: list[PredictionRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedPrediction(lineno, f"invalid JSON: {exc}") from None
            if not isinstance(payload, dict):
                raise MalformedPrediction(lineno, "record is not an object")
            for field, kind in (
                ("id", int),
                ("system", str),
                ("kind", str),
                ("query", str),
                ("reference", str),
                ("prediction", str),
                ("failed", bool),
            ):
                if field not in payload:
                    raise MalformedPrediction(lineno, f"missing field {field!r}")
                if not isinstance(payload[field], kind):
                    raise MalformedPrediction(lineno, f"field {field!r} must be {kind.__name__}")
            if payload["kind"] not in KINDS:
                raise MalformedPrediction(lineno, f"unknown kind {payload['kind']!r}")
            records.append(
                PredictionRecord(
                    id=payload["id"],
                    system=payload["system"],
                    kind=payload["kind"],
                    query=payload["query"],
                    reference=payload["reference"],
                    prediction=payload["prediction"],
                    failed=payload["failed"],
                    error=payload.get("error"),
                )
            )
    return records

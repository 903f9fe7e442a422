"""Dataset JSONL access.

This package consumes the dataset purely through its file contract
({"id", "function", "query", "call"} per line) and emits predictions in
the harness's predictions contract; it never imports the generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Example:
    id: int
    query: str
    call: str


class DatasetError(ValueError):
    pass


def load_examples(path: str | Path) -> list[Example]:
    examples: list[Example] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"{path}: line {lineno}: invalid JSON: {exc}") from None
            for field in ("id", "query", "call"):
                if field not in record:
                    raise DatasetError(f"{path}: line {lineno}: missing field {field!r}")
            examples.append(Example(int(record["id"]), str(record["query"]), str(record["call"])))
    if not examples:
        raise DatasetError(f"{path}: no examples")
    return examples


def exact_match(reference: str, prediction: str) -> bool:
    return reference.strip() == prediction.strip()


def write_predictions(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=True, separators=(",", ":")))
            fh.write("\n")

"""Versioned model files for both classifier kinds.

A model file is one JSON document: a header (format_version, kind, classes,
vocabulary, hyperparameters) followed by the body (per-class weights or
tree node arrays). JSON float serialization uses shortest round-trip
representations, so a loaded model reproduces the saved one exactly and
identical training runs write byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

import numpy as np

from geocmd.features import Vocabulary
from geocmd.forest import ForestModel, Tree
from geocmd.svm import SvmModel

MODEL_FORMAT_VERSION = 1

Model = Union[SvmModel, ForestModel]


class VersionMismatch(ValueError):
    """The file's format_version is not the one this code writes."""


class CorruptModel(ValueError):
    """The file is not a complete, well-formed model document."""


def _vocab_payload(vocab: Vocabulary) -> dict:
    return {
        "terms": vocab.terms,
        "idf": vocab.idf.tolist(),
        "n_docs": vocab.n_docs,
    }


def _vocab_from_payload(payload: dict) -> Vocabulary:
    terms = payload["terms"]
    return Vocabulary(
        term_index={term: i for i, term in enumerate(terms)},
        idf=np.array(payload["idf"], dtype=float),
        n_docs=int(payload["n_docs"]),
    )


def _payload(model: Model) -> dict:
    if isinstance(model, SvmModel):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "svm",
            "classes": model.classes,
            "vocabulary": _vocab_payload(model.vocabulary),
            "hyperparameters": {
                "C": model.c,
                "tol": model.tol,
                "max_iter": model.max_iter,
                "seed": model.seed,
            },
            "weights": [row.tolist() for row in model.weights],
            "biases": model.biases.tolist(),
        }
    if isinstance(model, ForestModel):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "rf",
            "classes": model.classes,
            "vocabulary": _vocab_payload(model.vocabulary),
            "hyperparameters": {
                "n_trees": model.n_trees,
                "max_features": model.max_features,
                "min_samples_split": model.min_samples_split,
                "min_samples_leaf": model.min_samples_leaf,
                "seed": model.seed,
            },
            "trees": [
                {
                    "feature": tree.feature.tolist(),
                    "threshold": tree.threshold.tolist(),
                    "left": tree.left.tolist(),
                    "right": tree.right.tolist(),
                    "label": tree.label.tolist(),
                    "impurity": tree.impurity.tolist(),
                }
                for tree in model.trees
            ],
        }
    raise TypeError(f"not a saveable model: {model!r}")


def save_model(model: Model, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_payload(model), fh, ensure_ascii=True, separators=(",", ":"))
        fh.write("\n")


def load_model(path: str | Path) -> Model:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptModel(f"not a valid model document: {exc}") from None
    if not isinstance(payload, dict):
        raise CorruptModel("model document is not an object")
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise VersionMismatch(f"expected format_version {MODEL_FORMAT_VERSION}, got {version!r}")
    kind = payload.get("kind")
    try:
        if kind == "svm":
            hp = payload["hyperparameters"]
            return SvmModel(
                classes=list(payload["classes"]),
                vocabulary=_vocab_from_payload(payload["vocabulary"]),
                weights=np.array(payload["weights"], dtype=float),
                biases=np.array(payload["biases"], dtype=float),
                c=float(hp["C"]),
                tol=float(hp["tol"]),
                max_iter=int(hp["max_iter"]),
                seed=int(hp["seed"]),
            )
        if kind == "rf":
            hp = payload["hyperparameters"]
            trees = [
                Tree(
                    feature=np.array(t["feature"], dtype=np.int32),
                    threshold=np.array(t["threshold"], dtype=float),
                    left=np.array(t["left"], dtype=np.int32),
                    right=np.array(t["right"], dtype=np.int32),
                    label=np.array(t["label"], dtype=np.int32),
                    impurity=np.array(t["impurity"], dtype=float),
                )
                for t in payload["trees"]
            ]
            return ForestModel(
                classes=list(payload["classes"]),
                vocabulary=_vocab_from_payload(payload["vocabulary"]),
                trees=trees,
                n_trees=int(hp["n_trees"]),
                seed=int(hp["seed"]),
                max_features=str(hp["max_features"]),
                min_samples_split=int(hp["min_samples_split"]),
                min_samples_leaf=int(hp["min_samples_leaf"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptModel(f"model body is incomplete: {exc}") from None
    raise CorruptModel(f"unknown model kind: {kind!r}")

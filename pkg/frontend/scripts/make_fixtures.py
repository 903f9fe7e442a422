#!/usr/bin/env python3
"""Build cross-runtime fixtures and inline demo assets.

Trains compact classifier models, snapshots the shipped rules file, and
records the native translator outputs for 50 sampled queries. The browser
core must reproduce those outputs exactly; the vitest suite enforces it.

Run from frontend/:  python3 scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import random
import tempfile
from importlib import resources
from pathlib import Path

from geocmd.calls import serialize_call
from geocmd.datagen import SplitSpec, generate, save_jsonl, split
from geocmd.forest import predict_forest_query, train_forest
from geocmd.model_io import save_model
from geocmd.rules import translate_rules
from geocmd.svm import predict_svm_query, train_svm
from geoslm.export import export_interchange
from geoslm.train import TrainConfig, decode_batch, finetune, load_checkpoint

FRONTEND = Path(__file__).resolve().parent.parent
FIXTURES = FRONTEND / "tests" / "fixtures"
ASSETS_TS = FRONTEND / "src" / "app" / "assets.gen.ts"

SEED = 1
PER_FUNCTION = 30
N_TREES = 25
PARITY_QUERIES = 50


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)

    rules_text = resources.files("geocmd").joinpath("data/rules.json").read_text("utf-8")
    (FIXTURES / "rules.json").write_text(rules_text, encoding="utf-8")

    samples = generate(seed=SEED, per_function=PER_FUNCTION)
    train, val, test = split(samples, SplitSpec(seed=SEED))
    held_out = val + test

    svm = train_svm(train, seed=SEED)
    rf = train_forest(train, n_trees=N_TREES, seed=SEED)
    save_model(svm, FIXTURES / "svm.model.json")
    save_model(rf, FIXTURES / "rf.model.json")

    rng = random.Random(SEED)
    chosen = rng.sample(held_out, PARITY_QUERIES)
    cases = []
    for sample in chosen:
        call = translate_rules(sample.query)
        cases.append(
            {
                "query": sample.query,
                "rules": serialize_call(call) if call is not None else None,
                "svm": predict_svm_query(svm, sample.query),
                "rf": predict_forest_query(rf, sample.query),
            }
        )
    # A few queries no rule should understand.
    for query in ["What is the weather like", "Tell me a story", ""]:
        call = translate_rules(query)
        cases.append({"query": query, "rules": serialize_call(call) if call else None})
    (FIXTURES / "parity.json").write_text(
        json.dumps({"seed": SEED, "cases": cases}, indent=1), encoding="utf-8"
    )

    svm_model_text = (FIXTURES / "svm.model.json").read_text(encoding="utf-8")
    ASSETS_TS.write_text(
        "// Generated by scripts/make_fixtures.py; do not edit by hand.\n"
        "// Inlined so the demo runs from file:// with zero network requests.\n"
        f"export const RULES_JSON: string = {json.dumps(rules_text)};\n"
        f"export const DEMO_SVM_MODEL_JSON: string = {json.dumps(svm_model_text)};\n",
        encoding="utf-8",
    )

    # A small trained sequence model exported to the interchange format, with
    # reference greedy decodes for the in-browser decoder to reproduce.
    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = Path(tmp)
        save_jsonl(train, tmp_path / "train.jsonl")
        save_jsonl(val, tmp_path / "val.jsonl")
        save_jsonl(test, tmp_path / "test.jsonl")
        checkpoint = tmp_path / "slm.ckpt"
        finetune(
            tmp_path / "train.jsonl",
            tmp_path / "val.jsonl",
            checkpoint,
            TrainConfig(epochs=4, batch_size=8, seed=SEED),
        )
        export_interchange(checkpoint, FIXTURES / "slm.npz", tmp_path / "test.jsonl", seed=SEED)
        model, tokenizer, _ = load_checkpoint(checkpoint)
        slm_queries = [s.query for s in test[:12]]
        slm_expected = decode_batch(model, tokenizer, slm_queries)
    (FIXTURES / "slm_parity.json").write_text(
        json.dumps(
            {"cases": [{"query": q, "prediction": p} for q, p in zip(slm_queries, slm_expected)]},
            indent=1,
        ),
        encoding="utf-8",
    )

    print(f"fixtures written to {FIXTURES}")
    print(f"inline assets written to {ASSETS_TS}")


if __name__ == "__main__":
    main()

import json
import subprocess
import sys

import numpy as np
import pytest

from geoslm.data import load_examples
from geoslm.export import export_interchange
from geoslm.runtime_numpy import InterchangeError, NumpyTranslator
from geoslm.train import decode_batch, load_checkpoint


@pytest.fixture(scope="module")
def exported(smoke_run, tmp_path_factory):
    dataset, result = smoke_run
    out = tmp_path_factory.mktemp("export") / "model.npz"
    summary = export_interchange(
        result.checkpoint_path, out, dataset / "test.jsonl", seed=0
    )
    return dataset, result, out, summary


def test_export_verifies_twenty_queries(exported):
    _, _, _, summary = exported
    assert summary["verified"] == 20
    assert summary["agreement"] == 20


def test_exported_bundle_loads_and_translates(exported):
    dataset, result, out, _ = exported
    translator = NumpyTranslator.load(out)
    model, tokenizer, _ = load_checkpoint(result.checkpoint_path)
    examples = load_examples(dataset / "test.jsonl")[:5]
    torch_side = decode_batch(model, tokenizer, [e.query for e in examples])
    for example, expected in zip(examples, torch_side):
        assert translator.translate(example.query) == expected


def test_export_loads_in_a_second_process(exported):
    dataset, result, out, _ = exported
    model, tokenizer, _ = load_checkpoint(result.checkpoint_path)
    examples = load_examples(dataset / "test.jsonl")[:10]
    expected = decode_batch(model, tokenizer, [e.query for e in examples])
    proc = subprocess.run(
        [sys.executable, "-m", "geoslm.runtime_numpy", str(out),
         str(dataset / "test.jsonl"), "--limit", "10"],
        capture_output=True, text=True, check=True,
    )
    got = [json.loads(line)["prediction"] for line in proc.stdout.strip().split("\n")]
    assert got == expected


def test_numpy_decode_is_deterministic(exported):
    dataset, _, out, _ = exported
    translator = NumpyTranslator.load(out)
    example = load_examples(dataset / "test.jsonl")[0]
    assert translator.translate(example.query) == translator.translate(example.query)


def test_loader_rejects_non_bundle(tmp_path):
    path = tmp_path / "bad.npz"
    np.savez(path, config=np.array(json.dumps({"format": "other", "version": 1})))
    with pytest.raises(InterchangeError):
        NumpyTranslator.load(path)


def test_loader_rejects_missing_config(tmp_path):
    path = tmp_path / "bad.npz"
    np.savez(path, weights=np.zeros(3))
    with pytest.raises(InterchangeError):
        NumpyTranslator.load(path)

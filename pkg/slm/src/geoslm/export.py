"""Interchange export: checkpoint -> portable .npz bundle, verified.

The bundle is a zip of little-endian float32 arrays (one per parameter
matrix, documented names) plus a JSON config string carrying dimensions
and the vocabulary. Export only succeeds if a numpy-only runtime decodes
20 sampled queries exactly like the torch checkpoint: any divergence
raises :class:`ExportMismatch`.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import numpy as np

from geoslm.data import load_examples
from geoslm.runtime_numpy import (
    INTERCHANGE_FORMAT,
    INTERCHANGE_VERSION,
    NumpyTranslator,
)
from geoslm.train import decode_batch, load_checkpoint

VERIFY_SAMPLES = 20


class ExportMismatch(RuntimeError):
    """The exported model did not reproduce the checkpoint's predictions."""


def _array(tensor) -> np.ndarray:
    return tensor.detach().cpu().numpy().astype(np.float32)


def export_interchange(
    checkpoint_path: str | Path,
    out_path: str | Path,
    verify_dataset: str | Path,
    seed: int = 0,
) -> dict:
    """Write the bundle and cross-check it against the checkpoint.

    Returns a summary dict with the verification sample size and agreement.
    """
    model, tokenizer, checkpoint = load_checkpoint(checkpoint_path)
    state = model.state_dict()
    arrays = {
        "embedding": _array(state["embedding.weight"]),
        "enc_w_ih_f": _array(state["encoder.weight_ih_l0"]),
        "enc_w_hh_f": _array(state["encoder.weight_hh_l0"]),
        "enc_b_ih_f": _array(state["encoder.bias_ih_l0"]),
        "enc_b_hh_f": _array(state["encoder.bias_hh_l0"]),
        "enc_w_ih_b": _array(state["encoder.weight_ih_l0_reverse"]),
        "enc_w_hh_b": _array(state["encoder.weight_hh_l0_reverse"]),
        "enc_b_ih_b": _array(state["encoder.bias_ih_l0_reverse"]),
        "enc_b_hh_b": _array(state["encoder.bias_hh_l0_reverse"]),
        "bridge_w": _array(state["bridge.weight"]),
        "bridge_b": _array(state["bridge.bias"]),
        "dec_w_ih": _array(state["decoder.weight_ih_l0"]),
        "dec_w_hh": _array(state["decoder.weight_hh_l0"]),
        "dec_b_ih": _array(state["decoder.bias_ih_l0"]),
        "dec_b_hh": _array(state["decoder.bias_hh_l0"]),
        "attn_w": _array(state["attention.weight"]),
        "shift_gain": _array(state["shift_gain"]).reshape(1),
        "out_w": _array(state["out.weight"]),
        "out_b": _array(state["out.bias"]),
        "gate_w": _array(state["copy_gate.weight"]),
        "gate_b": _array(state["copy_gate.bias"]),
    }
    config = {
        "format": INTERCHANGE_FORMAT,
        "version": INTERCHANGE_VERSION,
        "d_model": model.d_model,
        "hidden": model.hidden,
        "max_len": tokenizer.max_len,
        "vocab": tokenizer.id_to_token,
        "source_checkpoint_epoch": checkpoint.get("best_epoch"),
    }
    np.savez(out_path, config=np.array(json.dumps(config)), **arrays)

    examples = load_examples(verify_dataset)
    rng = random.Random(seed)
    sample = rng.sample(examples, min(VERIFY_SAMPLES, len(examples)))
    reference = decode_batch(model, tokenizer, [e.query for e in sample])
    translator = NumpyTranslator.load(out_path)
    mismatches = []
    for example, expected in zip(sample, reference):
        got = translator.translate(example.query)
        if got != expected:
            mismatches.append({"id": example.id, "checkpoint": expected, "export": got})
    if mismatches:
        raise ExportMismatch(
            f"{len(mismatches)}/{len(sample)} verification queries diverged: "
            + json.dumps(mismatches[:3])
        )
    return {"verified": len(sample), "agreement": len(sample), "path": str(out_path)}

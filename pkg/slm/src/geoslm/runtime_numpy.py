"""Numpy-only reference runtime for exported interchange models.

This module deliberately avoids torch: it demonstrates that the exported
``.npz`` bundle is a complete, runtime-neutral description of the network.
Greedy decoding here must agree exactly with the training checkpoint; the
export step fails otherwise.

Usable as a script in a separate process:

    python -m geoslm.runtime_numpy model.npz data.jsonl --limit 20
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from geoslm.data import load_examples
from geoslm.tokenizer import Tokenizer

INTERCHANGE_FORMAT = "geoslm-interchange"
INTERCHANGE_VERSION = 1


class InterchangeError(ValueError):
    pass


def _sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def _softmax(x: np.ndarray) -> np.ndarray:
    shifted = x - x.max()
    e = np.exp(shifted)
    return e / e.sum()


def _gru_cell(x, h, w_ih, w_hh, b_ih, b_hh):
    gi = x @ w_ih.T + b_ih
    gh = h @ w_hh.T + b_hh
    size = h.shape[-1]
    r = _sigmoid(gi[:size] + gh[:size])
    z = _sigmoid(gi[size : 2 * size] + gh[size : 2 * size])
    n = np.tanh(gi[2 * size :] + r * gh[2 * size :])
    return (1.0 - z) * n + z * h


class NumpyTranslator:
    def __init__(self, bundle: dict, config: dict):
        self.arrays = bundle
        self.config = config
        self.tokenizer = Tokenizer(
            {t: i for i, t in enumerate(config["vocab"])}, max_len=config["max_len"]
        )

    @classmethod
    def load(cls, path: str | Path) -> "NumpyTranslator":
        with np.load(path, allow_pickle=False) as archive:
            if "config" not in archive:
                raise InterchangeError("missing config entry")
            config = json.loads(str(archive["config"]))
            arrays = {k: archive[k].astype(np.float32) for k in archive.files if k != "config"}
        if config.get("format") != INTERCHANGE_FORMAT:
            raise InterchangeError("not an interchange bundle")
        if config.get("version") != INTERCHANGE_VERSION:
            raise InterchangeError(f"unsupported version {config.get('version')!r}")
        return cls(arrays, config)

    def _encode(self, src_ids: np.ndarray):
        a = self.arrays
        emb = a["embedding"][src_ids]  # (S, D)
        steps = src_ids.shape[0]
        half = a["enc_w_hh_f"].shape[1]
        fwd = np.zeros((steps, half), dtype=np.float32)
        h = np.zeros(half, dtype=np.float32)
        for t in range(steps):
            h = _gru_cell(emb[t], h, a["enc_w_ih_f"], a["enc_w_hh_f"], a["enc_b_ih_f"], a["enc_b_hh_f"])
            fwd[t] = h
        h_fwd_final = h
        bwd = np.zeros((steps, half), dtype=np.float32)
        h = np.zeros(half, dtype=np.float32)
        for t in range(steps - 1, -1, -1):
            h = _gru_cell(emb[t], h, a["enc_w_ih_b"], a["enc_w_hh_b"], a["enc_b_ih_b"], a["enc_b_hh_b"])
            bwd[t] = h
        h_bwd_final = h
        enc_out = np.concatenate([fwd, bwd], axis=1)  # (S, H)
        h0 = np.tanh(
            np.concatenate([h_fwd_final, h_bwd_final]) @ a["bridge_w"].T + a["bridge_b"]
        )
        return enc_out, h0

    def translate(self, query: str) -> str:
        a = self.arrays
        tok = self.tokenizer
        src_ids = np.array(tok.encode_source(query), dtype=np.int64)
        enc_out, hidden = self._encode(src_ids)
        mask = src_ids != tok.pad_id
        # score_s = (dec_h @ W^T) . enc_s, precomputed as (enc @ W) . dec_h.
        attended = enc_out @ a["attn_w"]
        shift_gain = np.float32(a["shift_gain"][0])
        token = tok.bos_id
        context = np.zeros(enc_out.shape[1], dtype=np.float32)
        att = np.zeros(src_ids.shape[0], dtype=np.float32)
        out_ids: list[int] = []
        for _ in range(tok.max_len):
            emb = a["embedding"][token]
            gru_in = np.concatenate([emb, context])
            hidden = _gru_cell(gru_in, hidden, a["dec_w_ih"], a["dec_w_hh"], a["dec_b_ih"], a["dec_b_hh"])
            scores = attended @ hidden
            shifted = np.zeros_like(att)
            shifted[1:] = att[:-1]
            scores = scores + shift_gain * shifted
            scores = np.where(mask, scores, np.float32(-np.inf))
            att = _softmax(scores)
            context = (att @ enc_out).astype(np.float32)
            features = np.concatenate([hidden, context])
            p_vocab = _softmax(features @ a["out_w"].T + a["out_b"])
            gate_in = np.concatenate([features, emb]) @ a["gate_w"][0] + a["gate_b"][0]
            gate = _sigmoid(float(gate_in))
            probs = gate * p_vocab
            np.add.at(probs, src_ids, (1.0 - gate) * att)
            token = int(np.argmax(probs))
            if token == tok.eos_id:
                break
            out_ids.append(token)
        return tok.decode(out_ids)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Run an exported interchange model without torch."
    )
    parser.add_argument("model", help="interchange .npz bundle")
    parser.add_argument("dataset", help="dataset JSONL to translate")
    parser.add_argument("--limit", type=int, default=0, help="translate only the first N")
    args = parser.parse_args(argv)
    translator = NumpyTranslator.load(args.model)
    examples = load_examples(args.dataset)
    if args.limit:
        examples = examples[: args.limit]
    for example in examples:
        print(json.dumps({"id": example.id, "prediction": translator.translate(example.query)}))
    return 0


if __name__ == "__main__":
    sys.exit(main())

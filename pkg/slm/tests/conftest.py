"""Shared fixtures: datasets come from the generator CLI (the file contract),
and the smoke checkpoint is trained once per session."""

from __future__ import annotations

import subprocess
import sys

import pytest

from geoslm.train import TrainConfig, finetune

SMOKE_CONFIG = TrainConfig(epochs=3, batch_size=2, evals_per_epoch=3, seed=1)


def _generate_split(root, seed: int, per_function: int) -> None:
    data = root / "data.jsonl"
    for argv in (
        ["generate", "--seed", str(seed), "--per-function", str(per_function),
         "--out", str(data)],
        ["split", "--in", str(data), "--seed", str(seed), "--out-dir", str(root)],
    ):
        subprocess.run(
            [sys.executable, "-m", "geocmd.cli", *argv],
            check=True, capture_output=True,
        )


@pytest.fixture(scope="session")
def smoke_dataset(tmp_path_factory):
    """500 samples -> 400 train / 50 val / 50 test."""
    root = tmp_path_factory.mktemp("smoke_data")
    _generate_split(root, seed=1, per_function=50)
    return root


@pytest.fixture(scope="session")
def smoke_run(smoke_dataset, tmp_path_factory):
    """The reduced-configuration training run used across the suite."""
    out = tmp_path_factory.mktemp("smoke_ckpt") / "smoke.ckpt"
    result = finetune(
        smoke_dataset / "train.jsonl",
        smoke_dataset / "val.jsonl",
        out,
        SMOKE_CONFIG,
    )
    return smoke_dataset, result

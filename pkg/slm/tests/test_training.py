import pytest
import torch

from geoslm.data import exact_match, load_examples
from geoslm.train import (
    CheckpointError,
    TrainConfig,
    decode_batch,
    finetune,
    load_checkpoint,
)


def test_smoke_run_completes_and_emits_checkpoint(smoke_run, tmp_path):
    dataset, result = smoke_run
    model, tokenizer, checkpoint = load_checkpoint(result.checkpoint_path)
    assert checkpoint["format"] == "geoslm-checkpoint"
    assert checkpoint["best_epoch"] == result.best_epoch
    assert tokenizer.max_len == 64


def test_smoke_loss_decreases_between_first_and_last_epoch(smoke_run):
    _, result = smoke_run
    by_epoch = {h.epoch: h.loss for h in result.history}
    assert by_epoch[3.0] < by_epoch[1.0]


def test_validation_ema_is_tracked(smoke_run):
    _, result = smoke_run
    assert result.best_val_ema == max(h.val_ema for h in result.history)
    assert 0.0 <= result.best_val_ema <= 1.0


def test_greedy_decode_is_deterministic(smoke_run):
    dataset, result = smoke_run
    examples = load_examples(dataset / "test.jsonl")[:20]
    queries = [e.query for e in examples]
    model, tokenizer, _ = load_checkpoint(result.checkpoint_path)
    first = decode_batch(model, tokenizer, queries)
    second = decode_batch(model, tokenizer, queries)
    assert first == second
    # A re-loaded checkpoint decodes identically too.
    model2, tokenizer2, _ = load_checkpoint(result.checkpoint_path)
    assert decode_batch(model2, tokenizer2, queries) == first


def test_decode_batching_does_not_change_results(smoke_run):
    dataset, result = smoke_run
    examples = load_examples(dataset / "test.jsonl")[:10]
    queries = [e.query for e in examples]
    model, tokenizer, _ = load_checkpoint(result.checkpoint_path)
    assert decode_batch(model, tokenizer, queries, batch_size=3) == decode_batch(
        model, tokenizer, queries, batch_size=64
    )


def test_model_learns_something_nontrivial(smoke_run):
    dataset, result = smoke_run
    examples = load_examples(dataset / "test.jsonl")
    model, tokenizer, _ = load_checkpoint(result.checkpoint_path)
    predictions = decode_batch(model, tokenizer, [e.query for e in examples])
    hits = sum(1 for e, p in zip(examples, predictions) if exact_match(e.call, p))
    assert hits > 0


def test_load_checkpoint_rejects_garbage(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_bytes(b"not a checkpoint")
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_load_checkpoint_rejects_wrong_format(tmp_path):
    path = tmp_path / "bad.ckpt"
    torch.save({"format": "other"}, path)
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_tiny_training_is_reproducible(smoke_dataset, tmp_path):
    config = TrainConfig(epochs=1, batch_size=8, seed=9)
    a = finetune(smoke_dataset / "val.jsonl", smoke_dataset / "test.jsonl",
                 tmp_path / "a.ckpt", config)
    b = finetune(smoke_dataset / "val.jsonl", smoke_dataset / "test.jsonl",
                 tmp_path / "b.ckpt", config)
    assert [h.loss for h in a.history] == [h.loss for h in b.history]
    assert [h.val_ema for h in a.history] == [h.val_ema for h in b.history]

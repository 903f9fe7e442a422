"""Training loop: seq2seq fit on dataset JSONL with validation-EMA selection.

Inputs are raw queries (no task prefix); targets are the canonical call
strings. Both sides are padded to exactly ``max_len`` tokens. The optimizer
is AdamW; the checkpoint kept is the one with the best validation
exact-match accuracy, ties going to the earlier epoch.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import torch

from geoslm.data import Example, exact_match, load_examples
from geoslm.model import CopySeq2Seq, sequence_loss
from geoslm.tokenizer import Tokenizer

CHECKPOINT_FORMAT = "geoslm-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass
class TrainConfig:
    epochs: int = 20
    batch_size: int = 8
    max_len: int = 64
    # The base-model family does not pin a rate for this setup; 3e-3 with
    # AdamW, a short warmup, and linear decay converges quickly at this
    # scale and is the documented default.
    lr: float = 3e-3
    weight_decay: float = 0.01
    grad_clip: float = 1.0
    warmup_steps: int = 50
    lr_floor: float = 0.1
    d_model: int = 128
    hidden: int = 192
    copy_bias: float = -1.0
    evals_per_epoch: int = 1
    seed: int = 1


@dataclass
class EpochStats:
    epoch: float  # fractional when validating more than once per epoch
    loss: float
    val_ema: float


@dataclass
class TrainResult:
    checkpoint_path: str
    best_epoch: float
    best_val_ema: float
    history: list[EpochStats] = field(default_factory=list)


def _encode_batchable(tokenizer: Tokenizer, examples: Sequence[Example]):
    src = torch.tensor([tokenizer.encode_source(e.query) for e in examples], dtype=torch.long)
    tgt = torch.tensor([tokenizer.encode_target(e.call) for e in examples], dtype=torch.long)
    bos = torch.full((len(examples), 1), tokenizer.bos_id, dtype=torch.long)
    tgt_in = torch.cat([bos, tgt[:, :-1]], dim=1)
    return src, tgt_in, tgt


def decode_batch(
    model: CopySeq2Seq, tokenizer: Tokenizer, queries: Sequence[str], batch_size: int = 64
) -> list[str]:
    model.eval()
    outputs: list[str] = []
    for start in range(0, len(queries), batch_size):
        chunk = queries[start : start + batch_size]
        src = torch.tensor([tokenizer.encode_source(q) for q in chunk], dtype=torch.long)
        ids = model.greedy_decode(src, tokenizer.bos_id, tokenizer.eos_id, tokenizer.max_len)
        outputs.extend(tokenizer.decode(row.tolist()) for row in ids)
    return outputs


def validation_ema(model: CopySeq2Seq, tokenizer: Tokenizer, examples: Sequence[Example]) -> float:
    predictions = decode_batch(model, tokenizer, [e.query for e in examples])
    hits = sum(1 for e, p in zip(examples, predictions) if exact_match(e.call, p))
    return hits / len(examples)


def finetune(
    train_path: str | Path,
    val_path: str | Path,
    out_path: str | Path,
    config: TrainConfig | None = None,
) -> TrainResult:
    config = config or TrainConfig()
    torch.manual_seed(config.seed)
    # Single-threaded math: reproducible and, at this model size, faster
    # than paying per-op thread synchronization.
    torch.set_num_threads(1)
    train_examples = load_examples(train_path)
    val_examples = load_examples(val_path)

    tokenizer = Tokenizer.build(
        [e.query for e in train_examples] + [e.call for e in train_examples],
        max_len=config.max_len,
    )
    src, tgt_in, tgt_out = _encode_batchable(tokenizer, train_examples)
    model = CopySeq2Seq(
        tokenizer.size,
        d_model=config.d_model,
        hidden=config.hidden,
        pad_id=tokenizer.pad_id,
        copy_bias=config.copy_bias,
    )
    optimizer = torch.optim.AdamW(
        model.parameters(), lr=config.lr, weight_decay=config.weight_decay
    )

    n = src.shape[0]
    steps_per_epoch = (n + config.batch_size - 1) // config.batch_size
    total_steps = max(1, steps_per_epoch * config.epochs)

    def lr_scale(step: int) -> float:
        if step < config.warmup_steps:
            return (step + 1) / config.warmup_steps
        progress = (step - config.warmup_steps) / max(1, total_steps - config.warmup_steps)
        return max(config.lr_floor, 1.0 - progress)

    scheduler = torch.optim.lr_scheduler.LambdaLR(optimizer, lr_scale)

    shuffler = torch.Generator().manual_seed(config.seed)
    history: list[EpochStats] = []
    best_state = None
    best_ema = -1.0
    best_epoch = -1.0
    eval_every = max(1, steps_per_epoch // max(1, config.evals_per_epoch))
    global_step = 0
    last_eval_step = 0
    running_loss = 0.0
    running_batches = 0
    for epoch in range(1, config.epochs + 1):
        model.train()
        order = torch.randperm(n, generator=shuffler)
        for start in range(0, n, config.batch_size):
            index = order[start : start + config.batch_size]
            batch_out = tgt_out[index]
            # Trim the shared pad tail: positions past the longest target in
            # the batch contribute nothing to the masked loss.
            steps = int((batch_out != tokenizer.pad_id).sum(dim=1).max())
            optimizer.zero_grad()
            probs = model(src[index], tgt_in[index][:, :steps])
            loss = sequence_loss(probs, batch_out[:, :steps], tokenizer.pad_id)
            loss.backward()
            torch.nn.utils.clip_grad_norm_(model.parameters(), config.grad_clip)
            optimizer.step()
            scheduler.step()
            running_loss += float(loss.detach())
            running_batches += 1
            global_step += 1
            end_of_epoch = start + config.batch_size >= n
            if (global_step % eval_every == 0 or end_of_epoch) and global_step != last_eval_step:
                last_eval_step = global_step
                ema = validation_ema(model, tokenizer, val_examples)
                point = round(global_step / steps_per_epoch, 3)
                history.append(
                    EpochStats(epoch=point, loss=running_loss / running_batches, val_ema=ema)
                )
                running_loss = 0.0
                running_batches = 0
                if ema > best_ema:
                    best_ema = ema
                    best_epoch = point
                    best_state = {
                        k: v.detach().clone() for k, v in model.state_dict().items()
                    }
                model.train()

    checkpoint = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "config": asdict(config),
        "vocab": tokenizer.id_to_token,
        "state_dict": best_state,
        "history": [asdict(h) for h in history],
        "best_epoch": best_epoch,
        "best_val_ema": best_ema,
    }
    torch.save(checkpoint, out_path)
    return TrainResult(
        checkpoint_path=str(out_path),
        best_epoch=best_epoch,
        best_val_ema=best_ema,
        history=history,
    )


class CheckpointError(ValueError):
    pass


def load_checkpoint(path: str | Path) -> tuple[CopySeq2Seq, Tokenizer, dict]:
    try:
        checkpoint = torch.load(path, map_location="cpu", weights_only=False)
    except Exception as exc:
        raise CheckpointError(f"cannot load checkpoint: {exc}") from None
    if not isinstance(checkpoint, dict) or checkpoint.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError("not a geoslm checkpoint")
    if checkpoint.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {checkpoint.get('version')!r}")
    config = checkpoint["config"]
    vocab = checkpoint["vocab"]
    tokenizer = Tokenizer({t: i for i, t in enumerate(vocab)}, max_len=config["max_len"])
    model = CopySeq2Seq(
        tokenizer.size,
        d_model=config["d_model"],
        hidden=config["hidden"],
        pad_id=tokenizer.pad_id,
        copy_bias=config.get("copy_bias", -1.0),
    )
    model.load_state_dict(checkpoint["state_dict"])
    model.eval()
    return model, tokenizer, checkpoint

"""Command line: train, predict, export, translate."""

from __future__ import annotations

import argparse
import json
import sys

from geoslm.export import export_interchange
from geoslm.predict import predict_file
from geoslm.train import TrainConfig, finetune


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoslm",
        description="Train and run the small map-command translation model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit on train/val dataset JSONL files")
    p.add_argument("--train", required=True)
    p.add_argument("--val", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=8)
    p.add_argument("--max-len", type=int, default=64)
    p.add_argument("--lr", type=float, default=3e-3)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("predict", help="greedy-decode a dataset into predictions JSONL")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("export", help="write a verified interchange bundle")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--verify-with", required=True, help="dataset JSONL for the 20-query check")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("translate", help="translate one query with a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("query")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "train":
            config = TrainConfig(
                epochs=args.epochs,
                batch_size=args.batch_size,
                max_len=args.max_len,
                lr=args.lr,
                seed=args.seed,
            )
            result = finetune(args.train, args.val, args.out, config)
            print(
                json.dumps(
                    {
                        "checkpoint": result.checkpoint_path,
                        "best_epoch": result.best_epoch,
                        "best_val_ema": result.best_val_ema,
                    }
                )
            )
        elif args.command == "predict":
            rows = predict_file(args.checkpoint, args.in_path, args.out)
            print(json.dumps({"written": len(rows), "out": args.out}))
        elif args.command == "export":
            summary = export_interchange(args.checkpoint, args.out, args.verify_with, args.seed)
            print(json.dumps(summary))
        else:
            from geoslm.train import decode_batch, load_checkpoint

            model, tokenizer, _ = load_checkpoint(args.checkpoint)
            print(decode_batch(model, tokenizer, [args.query])[0])
    except Exception as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface for the full offline pipeline.

``geocmd generate | split | train | predict | evaluate | report`` chain
through files: dataset JSONL, model JSON, predictions JSONL, report CSV.
Failures print one machine-readable JSON object on stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from geocmd import harness
from geocmd.datagen import SplitSpec, generate, load_jsonl, save_jsonl, split
from geocmd.forest import train_forest
from geocmd.llm import API_KEY_ENV, LlmConfig
from geocmd.model_io import load_model, save_model
from geocmd.records import load_predictions, save_predictions
from geocmd.rules import RuleSet
from geocmd.svm import train_svm


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geocmd",
        description="Translate natural-language map requests into canonical GIS calls "
        "and benchmark the competing translators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a labeled dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--per-function", type=int, default=200)
    p.add_argument("--out", required=True)

    p = sub.add_parser("split", help="split a dataset into train/val/test")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--train-fraction", type=float, default=0.8)
    p.add_argument("--val-fraction", type=float, default=0.5)

    p = sub.add_parser("train", help="train a classifier")
    p.add_argument("--model", choices=["svm", "rf"], required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--n-trees", type=int, default=100)

    p = sub.add_parser("predict", help="run one system over a dataset")
    p.add_argument("--system", choices=["rules", "svm", "rf", "llm"], required=True)
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--model", help="model file for svm/rf")
    p.add_argument("--rules", help="rules file (defaults to the shipped rules)")
    p.add_argument("--endpoint", help="chat endpoint URL for --system llm")
    p.add_argument("--model-name", default="command-r-08-2024")
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--timeout-ms", type=int, default=30000)
    p.add_argument("--progress", help="progress file enabling resumable llm runs")

    p = sub.add_parser("evaluate", help="score prediction files into a report CSV")
    p.add_argument("--preds", nargs="+", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="render a report CSV")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--format", choices=["csv", "md", "markdown"], default="md")
    p.add_argument("--out", help="write here instead of stdout")

    return parser


def _cmd_generate(args) -> None:
    save_jsonl(generate(seed=args.seed, per_function=args.per_function), args.out)


def _cmd_split(args) -> None:
    samples = load_jsonl(args.in_path)
    spec = SplitSpec(
        seed=args.seed,
        train_fraction=args.train_fraction,
        val_fraction_of_test=args.val_fraction,
    )
    train, val, test = split(samples, spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_jsonl(train, out / "train.jsonl")
    save_jsonl(val, out / "val.jsonl")
    save_jsonl(test, out / "test.jsonl")


def _cmd_train(args) -> None:
    samples = load_jsonl(args.in_path)
    if args.model == "svm":
        model = train_svm(
            samples, c=args.c, tol=args.tol, max_iter=args.max_iter, seed=args.seed
        )
    else:
        model = train_forest(samples, n_trees=args.n_trees, seed=args.seed)
    save_model(model, args.out)


def _cmd_predict(args) -> None:
    samples = load_jsonl(args.in_path)
    if args.system == "rules":
        ruleset = RuleSet.from_path(args.rules) if args.rules else None
        records = harness.predict("rules", samples, ruleset=ruleset)
    elif args.system in ("svm", "rf"):
        if not args.model:
            raise ValueError(f"--system {args.system} requires --model")
        records = harness.predict(args.system, samples, model=load_model(args.model))
    else:
        if not args.endpoint:
            raise ValueError("--system llm requires --endpoint")
        config = LlmConfig.from_env(
            args.endpoint,
            model_name=args.model_name,
            max_retries=args.max_retries,
            timeout_ms=args.timeout_ms,
        )
        records = harness.predict("llm", samples, config=config, progress_path=args.progress)
    save_predictions(records, args.out)


def _cmd_evaluate(args) -> None:
    records = []
    for path in args.preds:
        records.extend(load_predictions(path))
    reports = harness.evaluate(records)
    Path(args.out).write_text(harness.report(reports, format="csv"), encoding="utf-8")


def _cmd_report(args) -> None:
    reports = harness.read_report_csv(Path(args.in_path).read_text(encoding="utf-8"))
    rendered = harness.report(reports, format=args.format)
    if args.out:
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)


_COMMANDS = {
    "generate": _cmd_generate,
    "split": _cmd_split,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except Exception as exc:  # surfaced as one machine-readable line
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

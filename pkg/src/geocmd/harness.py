"""End-to-end comparison harness: predict, evaluate, report.

Systems produce :class:`PredictionRecord` streams (directly or via
predictions files), the evaluator routes each system to the metric family
its kind calls for, and the reporter renders one row per system with
dashes in inapplicable cells. Externally produced predictions participate
by writing the same JSONL contract; nothing here depends on how a system
was built.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from geocmd.calls import GIS_FUNCTIONS, serialize_call
from geocmd.datagen import Sample
from geocmd.forest import ForestModel, predict_forest_query
from geocmd.llm import LlmConfig, Transport, batch_translate
from geocmd.metrics import (
    classification_report,
    exact_match_accuracy,
    levenshtein_similarity,
    rouge1,
    rougeL,
)
from geocmd.records import PredictionRecord
from geocmd.rules import RuleSet, translate_rules
from geocmd.svm import SvmModel, predict_svm_query


class MixedKinds(ValueError):
    """One system emitted both generation and classification records."""


class EmptySystem(ValueError):
    """A system has no records to evaluate."""


class UnknownSystem(ValueError):
    """The requested system name has no predictor."""


@dataclass(frozen=True)
class MetricReport:
    """One Table-row of scores; fields inapplicable to the kind are None."""

    system: str
    kind: str
    n: int
    ema: Optional[float] = None
    ls: Optional[float] = None
    rouge1: Optional[float] = None
    rougeL: Optional[float] = None
    precision: Optional[float] = None
    recall: Optional[float] = None
    f1: Optional[float] = None
    accuracy: Optional[float] = None


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------


def predict_rules(
    samples: Sequence[Sample], ruleset: Optional[RuleSet] = None
) -> list[PredictionRecord]:
    records = []
    for s in samples:
        call = translate_rules(s.query, ruleset)
        records.append(
            PredictionRecord(
                id=s.id,
                system="rules",
                kind="generation",
                query=s.query,
                reference=s.call,
                prediction=serialize_call(call) if call is not None else "",
                failed=call is None,
                error=None if call is not None else "NoMatch",
            )
        )
    return records


def predict_classifier(
    model: SvmModel | ForestModel, samples: Sequence[Sample]
) -> list[PredictionRecord]:
    if isinstance(model, SvmModel):
        system, predict = "svm", predict_svm_query
    elif isinstance(model, ForestModel):
        system, predict = "rf", predict_forest_query
    else:
        raise TypeError(f"not a classifier model: {model!r}")
    return [
        PredictionRecord(
            id=s.id,
            system=system,
            kind="classification",
            query=s.query,
            reference=s.function,
            prediction=predict(model, s.query),
        )
        for s in samples
    ]


def predict(
    system: str,
    samples: Sequence[Sample],
    model: SvmModel | ForestModel | None = None,
    config: Optional[LlmConfig] = None,
    ruleset: Optional[RuleSet] = None,
    transport: Optional[Transport] = None,
    progress_path=None,
) -> list[PredictionRecord]:
    """Run one system over samples and return its records."""
    if system == "rules":
        return predict_rules(samples, ruleset)
    if system in ("svm", "rf"):
        if model is None:
            raise ValueError(f"system {system!r} needs a trained model")
        return predict_classifier(model, samples)
    if system == "llm":
        if config is None:
            raise ValueError("system 'llm' needs an LlmConfig")
        return batch_translate(config, samples, transport, progress_path)
    raise UnknownSystem(f"no such system: {system!r}")


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(records: Iterable[PredictionRecord]) -> list[MetricReport]:
    """Aggregate records into one MetricReport per system.

    Failed records score as empty predictions, never as exclusions. Reports
    come back sorted by system name so output is order-independent.
    """
    by_system: dict[str, list[PredictionRecord]] = {}
    for record in records:
        by_system.setdefault(record.system, []).append(record)
    if not by_system:
        raise EmptySystem("no records to evaluate")
    reports = []
    for system in sorted(by_system):
        rows = sorted(by_system[system], key=lambda r: r.id)
        kinds = {r.kind for r in rows}
        if len(kinds) > 1:
            raise MixedKinds(f"system {system!r} mixes kinds: {sorted(kinds)}")
        kind = kinds.pop()
        pairs = [(r.reference, r.prediction if not r.failed else "") for r in rows]
        if kind == "generation":
            reports.append(
                MetricReport(
                    system=system,
                    kind=kind,
                    n=len(rows),
                    ema=exact_match_accuracy(pairs),
                    ls=_mean(levenshtein_similarity(ref, pred) for ref, pred in pairs),
                    rouge1=_mean(rouge1(ref, pred) for ref, pred in pairs),
                    rougeL=_mean(rougeL(ref, pred) for ref, pred in pairs),
                )
            )
        else:
            rep = classification_report(pairs, GIS_FUNCTIONS, allow_unknown_predictions=True)
            reports.append(
                MetricReport(
                    system=system,
                    kind=kind,
                    n=len(rows),
                    precision=rep.macro_precision,
                    recall=rep.macro_recall,
                    f1=rep.macro_f1,
                    accuracy=rep.accuracy,
                )
            )
    return reports


def _mean(values: Iterable[float]) -> float:
    items = list(values)
    return sum(items) / len(items)


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

REPORT_COLUMNS = (
    "system", "kind", "n",
    "ema", "ls", "rouge1", "rougeL",
    "precision", "recall", "f1", "accuracy",
)

_MD_HEADERS = (
    "System", "Kind", "n",
    "EMA", "LS", "ROUGE-1", "ROUGE-L",
    "Precision", "Recall", "F1", "Accuracy",
)


def _cell(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rows(reports: Sequence[MetricReport]) -> list[list[str]]:
    rows = []
    for rep in sorted(reports, key=lambda r: r.system):
        rows.append([_cell(getattr(rep, column)) for column in REPORT_COLUMNS])
    return rows


def report(reports: Sequence[MetricReport], format: str = "csv") -> str:
    """Render reports as CSV or a Markdown table, byte-deterministically."""
    rows = _rows(reports)
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        writer.writerows(rows)
        return buffer.getvalue()
    if format in ("md", "markdown"):
        lines = [
            "| " + " | ".join(_MD_HEADERS) + " |",
            "| " + " | ".join("---" for _ in _MD_HEADERS) + " |",
        ]
        lines.extend("| " + " | ".join(row) + " |" for row in rows)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format: {format!r}")


def read_report_csv(text: str) -> list[MetricReport]:
    """Parse a report CSV back into MetricReports (exact float round-trip)."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != REPORT_COLUMNS:
        raise ValueError(f"unexpected report columns: {header!r}")
    reports = []
    for row in reader:
        values = dict(zip(REPORT_COLUMNS, row))
        reports.append(
            MetricReport(
                system=values["system"],
                kind=values["kind"],
                n=int(values["n"]),
                **{
                    column: (None if values[column] == "-" else float(values[column]))
                    for column in REPORT_COLUMNS[3:]
                },
            )
        )
    return reports

"""Evaluation metrics for translated call strings and classified labels.

Generation systems are scored with exact-match accuracy, Levenshtein
similarity, ROUGE-1, and ROUGE-L; classification systems with
precision/recall/F1/accuracy derived from per-class confusion counts.

Boundary conventions (division by zero comes up in every formula):
identical empty inputs score 1 for the string metrics, a class with no
true or predicted members scores 0, and 0/0 is defined as 0 throughout
the confusion-matrix family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class EmptyInput(ValueError):
    """A metric over a collection was given nothing to score."""


class UnknownLabel(ValueError):
    """A label outside the declared class set appeared in the pairs."""


# ---------------------------------------------------------------------------
# Generation metrics
# ---------------------------------------------------------------------------


def exact_match_accuracy(pairs: Sequence[tuple[str, str]]) -> float:
    """Fraction of (reference, prediction) pairs that match exactly.

    Both sides are trimmed of surrounding whitespace; nothing else is
    normalized — the entire predicted string must equal the reference.
    """
    if not pairs:
        raise EmptyInput("no pairs to score")
    hits = sum(1 for ref, pred in pairs if ref.strip() == pred.strip())
    return hits / len(pairs)


def levenshtein_distance(s1: str, s2: str) -> int:
    """Minimum number of single-character edits turning ``s1`` into ``s2``."""
    if len(s1) < len(s2):
        s1, s2 = s2, s1
    if not s2:
        return len(s1)
    previous = list(range(len(s2) + 1))
    for i, c1 in enumerate(s1):
        current = [i + 1]
        for j, c2 in enumerate(s2):
            current.append(
                min(
                    previous[j + 1] + 1,  # deletion
                    current[j] + 1,  # insertion
                    previous[j] + (c1 != c2),  # substitution
                )
            )
        previous = current
    return previous[-1]


def levenshtein_similarity(s1: str, s2: str) -> float:
    """1 - D(s1, s2) / max(|s1|, |s2|); two empty strings are similarity 1."""
    longest = max(len(s1), len(s2))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein_distance(s1, s2) / longest


_DELIMITERS = "()[],'"


def tokenize_for_rouge(s: str) -> list[str]:
    """Split a call string into scoring tokens.

    Each of ``( ) [ ] , '`` becomes its own token; everything else splits on
    whitespace runs. The empty string tokenizes to the empty sequence.
    """
    for ch in _DELIMITERS:
        s = s.replace(ch, f" {ch} ")
    return s.split()


def rouge1(reference: str, candidate: str) -> float:
    """Clipped unigram recall: overlapping token count over reference length."""
    ref = tokenize_for_rouge(reference)
    cand = tokenize_for_rouge(candidate)
    if not ref:
        return 1.0 if not cand else 0.0
    cand_counts: dict[str, int] = {}
    for tok in cand:
        cand_counts[tok] = cand_counts.get(tok, 0) + 1
    overlap = 0
    for tok in set(ref):
        overlap += min(ref.count(tok), cand_counts.get(tok, 0))
    return overlap / len(ref)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for x in a:
        current = [0]
        for j, y in enumerate(b):
            if x == y:
                current.append(previous[j] + 1)
            else:
                current.append(max(previous[j + 1], current[j]))
        previous = current
    return previous[-1]


def rougeL(reference: str, candidate: str) -> float:
    """Token-level LCS length over reference length."""
    ref = tokenize_for_rouge(reference)
    cand = tokenize_for_rouge(candidate)
    if not ref:
        return 1.0 if not cand else 0.0
    return lcs_length(ref, cand) / len(ref)


# ---------------------------------------------------------------------------
# Classification metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    accuracy: float
    counts: ConfusionCounts


@dataclass(frozen=True)
class ClassificationReport:
    """Per-class and aggregate scores for a label-prediction run.

    ``accuracy`` is global (correct predictions over all samples); the macro
    figures are unweighted means over the declared classes, so a class that
    never occurs still pulls the average down via the 0/0 -> 0 rule.
    """

    per_class: dict[str, ClassMetrics]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def confusion_counts(
    pairs: Sequence[tuple[str, str]],
    classes: Sequence[str],
    allow_unknown_predictions: bool = False,
) -> dict[str, ConfusionCounts]:
    declared = set(classes)
    for true, pred in pairs:
        if true not in declared:
            raise UnknownLabel(f"true label {true!r} not in declared classes")
        if pred not in declared and not allow_unknown_predictions:
            raise UnknownLabel(f"predicted label {pred!r} not in declared classes")
    total = len(pairs)
    counts = {}
    for cls in classes:
        tp = sum(1 for t, p in pairs if t == cls and p == cls)
        fp = sum(1 for t, p in pairs if t != cls and p == cls)
        fn = sum(1 for t, p in pairs if t == cls and p != cls)
        counts[cls] = ConfusionCounts(tp, fp, fn, total - tp - fp - fn)
    return counts


def classification_report(
    pairs: Sequence[tuple[str, str]],
    classes: Iterable[str],
    allow_unknown_predictions: bool = False,
) -> ClassificationReport:
    """Score (true_label, predicted_label) pairs against a declared class set.

    With ``allow_unknown_predictions`` an out-of-set prediction (e.g. from a
    failed record) counts as a miss for the true class instead of raising.
    """
    class_list = list(classes)
    if not pairs:
        raise EmptyInput("no pairs to score")
    counts = confusion_counts(pairs, class_list, allow_unknown_predictions)
    total = len(pairs)
    per_class = {}
    for cls in class_list:
        c = counts[cls]
        precision = _safe_div(c.tp, c.tp + c.fp)
        recall = _safe_div(c.tp, c.tp + c.fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        accuracy = _safe_div(c.tp + c.tn, total)
        per_class[cls] = ClassMetrics(precision, recall, f1, accuracy, c)
    n = len(class_list)
    correct = sum(counts[cls].tp for cls in class_list)
    return ClassificationReport(
        per_class=per_class,
        macro_precision=sum(m.precision for m in per_class.values()) / n,
        macro_recall=sum(m.recall for m in per_class.values()) / n,
        macro_f1=sum(m.f1 for m in per_class.values()) / n,
        accuracy=correct / total,
    )

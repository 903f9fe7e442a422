"""One-vs-rest linear SVM trained from scratch on tf-idf features.

Each class gets a binary separator minimizing the squared-hinge soft-margin
objective

    J(w, b) = 0.5 * ||w||^2 + C * sum_i max(0, 1 - y_i (w . x_i + b))^2

with the bias trained but not regularized. The optimizer is full-batch
gradient descent with Armijo backtracking, which makes the recorded
objective strictly non-increasing epoch over epoch — a property the test
suite checks — and keeps training fully deterministic for a given dataset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from geocmd.datagen import Sample
from geocmd.features import FeatureVector, Vocabulary, featurize, featurize_matrix, fit_vocabulary


class SingleClassTraining(ValueError):
    """Training data must contain at least two classes."""


class DimensionMismatch(ValueError):
    """The feature vector does not match the model's vocabulary size."""


@dataclass
class SvmModel:
    classes: list[str]
    vocabulary: Vocabulary
    weights: np.ndarray  # (K, V)
    biases: np.ndarray  # (K,)
    c: float
    tol: float
    max_iter: int
    seed: int
    objective_history: list[list[float]] = field(default_factory=list)


def objective(
    w: np.ndarray, b: float, x: sparse.csr_matrix, y: np.ndarray, c: float
) -> float:
    margins = 1.0 - y * (x @ w + b)
    violations = np.maximum(margins, 0.0)
    return 0.5 * float(w @ w) + c * float(violations @ violations)


def gradient(
    w: np.ndarray, b: float, x: sparse.csr_matrix, y: np.ndarray, c: float
) -> tuple[np.ndarray, float]:
    margins = 1.0 - y * (x @ w + b)
    active = margins > 0.0
    coeff = np.where(active, y * margins, 0.0)
    grad_w = w - 2.0 * c * (x.T @ coeff)
    grad_b = -2.0 * c * float(np.sum(coeff))
    return grad_w, grad_b


def _minimize(
    x: sparse.csr_matrix, y: np.ndarray, c: float, tol: float, max_iter: int
) -> tuple[np.ndarray, float, list[float]]:
    """Gradient descent with backtracking; returns (w, b, objective history)."""
    w = np.zeros(x.shape[1])
    b = 0.0
    history = [objective(w, b, x, y, c)]
    step = 1.0
    for _ in range(max_iter):
        grad_w, grad_b = gradient(w, b, x, y, c)
        grad_sq = float(grad_w @ grad_w) + grad_b * grad_b
        if grad_sq == 0.0:
            break
        current = history[-1]
        # Armijo backtracking: accept the first step achieving a sufficient
        # decrease; the previous step size seeds the search and is allowed
        # to grow again so progress is not permanently throttled.
        step = min(step * 2.0, 1.0)
        accepted = False
        for _ in range(60):
            cand_w = w - step * grad_w
            cand_b = b - step * grad_b
            cand_obj = objective(cand_w, cand_b, x, y, c)
            if cand_obj <= current - 1e-4 * step * grad_sq:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        w, b = cand_w, cand_b
        history.append(cand_obj)
        if current - cand_obj < tol * max(abs(current), 1.0):
            break
    return w, b, history


def train_svm(
    train: Sequence[Sample],
    c: float = 1.0,
    tol: float = 1e-4,
    max_iter: int = 1000,
    seed: int = 0,
) -> SvmModel:
    """Fit one separator per class over the training split.

    ``seed`` is part of the model identity (it is persisted) but training
    itself is deterministic: weights start at zero and the data order never
    matters for full-batch gradients.
    """
    labels = sorted({s.function for s in train})
    if len(labels) < 2:
        raise SingleClassTraining("need at least two classes to train")
    vocab = fit_vocabulary(s.query for s in train)
    x = featurize_matrix(vocab, [s.query for s in train])
    weights = np.zeros((len(labels), vocab.size))
    biases = np.zeros(len(labels))
    history: list[list[float]] = []
    for k, label in enumerate(labels):
        y = np.where(np.array([s.function for s in train]) == label, 1.0, -1.0)
        w, b, epochs = _minimize(x, y, c, tol, max_iter)
        weights[k] = w
        biases[k] = b
        history.append(epochs)
    return SvmModel(
        classes=labels,
        vocabulary=vocab,
        weights=weights,
        biases=biases,
        c=c,
        tol=tol,
        max_iter=max_iter,
        seed=seed,
        objective_history=history,
    )


def decision_values(model: SvmModel, x: FeatureVector) -> np.ndarray:
    if x.dimension != model.weights.shape[1]:
        raise DimensionMismatch(
            f"feature dimension {x.dimension} != model dimension {model.weights.shape[1]}"
        )
    return model.weights[:, x.indices] @ x.weights + model.biases


def predict_svm(model: SvmModel, x: FeatureVector) -> str:
    """argmax of per-class decision values; ties go to the lowest class index."""
    scores = decision_values(model, x)
    return model.classes[int(np.argmax(scores))]


def predict_svm_query(model: SvmModel, query: str) -> str:
    return predict_svm(model, featurize(model.vocabulary, query))

"""Random forest classifier built from scratch on tf-idf features.

Each tree trains on a bootstrap sample (size n, drawn with replacement),
grows without a depth limit using Gini impurity, and re-draws sqrt(V)
candidate features at every node. Per-tree RNG streams are derived from
(seed, tree_index), so the forest is identical no matter how many workers
build it or in what order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from geocmd.datagen import Sample
from geocmd.features import FeatureVector, Vocabulary, featurize, featurize_matrix, fit_vocabulary
from geocmd.svm import DimensionMismatch, SingleClassTraining

MIN_SAMPLES_SPLIT = 2
MIN_SAMPLES_LEAF = 1


@dataclass
class Tree:
    """Flat node arrays; ``feature == -1`` marks a leaf carrying ``label``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    label: np.ndarray
    impurity: np.ndarray


@dataclass
class ForestModel:
    classes: list[str]
    vocabulary: Vocabulary
    trees: list[Tree]
    n_trees: int
    seed: int
    max_features: str = "sqrt"
    min_samples_split: int = MIN_SAMPLES_SPLIT
    min_samples_leaf: int = MIN_SAMPLES_LEAF


def gini_impurity(labels: np.ndarray, n_classes: int) -> float:
    counts = np.bincount(labels, minlength=n_classes)
    total = labels.shape[0]
    if total == 0:
        return 0.0
    p = counts / total
    return float(1.0 - np.sum(p * p))


def _best_split(
    x: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    features: np.ndarray,
    n_classes: int,
) -> tuple[int, float] | None:
    """Lowest weighted-Gini split over the candidate features.

    Thresholds are midpoints between consecutive distinct values; the first
    (feature-order, then ascending threshold) minimum wins ties so results
    do not depend on floating-point argmin quirks.
    """
    n = rows.shape[0]
    y_node = y[rows]
    best_score = np.inf
    best: tuple[int, float] | None = None
    positions = np.arange(1, n)
    for f in features:
        values = x[rows, f]
        order = np.argsort(values, kind="stable")
        v = values[order]
        if v[0] == v[-1]:
            continue
        labels_sorted = y_node[order]
        onehot = np.zeros((n, n_classes))
        onehot[np.arange(n), labels_sorted] = 1.0
        cum = np.cumsum(onehot, axis=0)
        left_counts = cum[:-1]
        right_counts = cum[-1] - left_counts
        left_n = positions
        right_n = n - positions
        # n * weighted Gini, up to the constant n: argmin is unchanged.
        score = (
            left_n
            - np.sum(left_counts**2, axis=1) / left_n
            + right_n
            - np.sum(right_counts**2, axis=1) / right_n
        )
        valid = v[1:] > v[:-1]
        if not np.any(valid):
            continue
        candidates = np.flatnonzero(valid)
        local = candidates[int(np.argmin(score[candidates]))]
        if score[local] < best_score:
            best_score = float(score[local])
            best = (int(f), float((v[local] + v[local + 1]) / 2.0))
    return best


def grow_tree(
    x: np.ndarray,
    y: np.ndarray,
    rows: np.ndarray,
    rng: np.random.Generator,
    n_classes: int,
) -> Tree:
    """Grow one unpruned tree over the given (bootstrap) row indices."""
    n_features = x.shape[1]
    m = max(1, int(np.sqrt(n_features)))
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    label: list[int] = []
    impurity: list[float] = []

    def majority(labels: np.ndarray) -> int:
        # bincount argmax returns the first maximum: the smallest class
        # index, i.e. the lexicographically smallest label.
        return int(np.argmax(np.bincount(labels, minlength=n_classes)))

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        label.append(-1)
        impurity.append(0.0)
        return len(feature) - 1

    root = new_node()
    stack: list[tuple[int, np.ndarray]] = [(root, rows)]
    while stack:
        node, node_rows = stack.pop()
        node_y = y[node_rows]
        node_impurity = gini_impurity(node_y, n_classes)
        impurity[node] = node_impurity
        if node_impurity == 0.0 or node_rows.shape[0] < MIN_SAMPLES_SPLIT:
            label[node] = majority(node_y)
            continue
        candidates = rng.choice(n_features, size=min(m, n_features), replace=False)
        found = _best_split(x, y, node_rows, candidates, n_classes)
        if found is None:
            label[node] = majority(node_y)
            continue
        f, t = found
        go_left = x[node_rows, f] <= t
        left_rows = node_rows[go_left]
        right_rows = node_rows[~go_left]
        feature[node] = f
        threshold[node] = t
        left_child = new_node()
        right_child = new_node()
        left[node] = left_child
        right[node] = right_child
        # Right first so the left subtree is processed (and numbered) next,
        # keeping node ids independent of data but fixed for a given tree.
        stack.append((right_child, right_rows))
        stack.append((left_child, left_rows))
    return Tree(
        feature=np.array(feature, dtype=np.int32),
        threshold=np.array(threshold),
        left=np.array(left, dtype=np.int32),
        right=np.array(right, dtype=np.int32),
        label=np.array(label, dtype=np.int32),
        impurity=np.array(impurity),
    )


def train_forest(
    train: Sequence[Sample], n_trees: int = 100, seed: int = 0
) -> ForestModel:
    labels = sorted({s.function for s in train})
    if len(labels) < 2:
        raise SingleClassTraining("need at least two classes to train")
    class_code = {label: i for i, label in enumerate(labels)}
    vocab = fit_vocabulary(s.query for s in train)
    x = featurize_matrix(vocab, [s.query for s in train]).toarray()
    y = np.array([class_code[s.function] for s in train], dtype=np.int64)
    n = x.shape[0]
    trees = []
    for index in range(n_trees):
        rng = np.random.default_rng([seed, index])
        bootstrap = rng.integers(0, n, size=n)
        trees.append(grow_tree(x, y, bootstrap, rng, len(labels)))
    return ForestModel(
        classes=labels, vocabulary=vocab, trees=trees, n_trees=n_trees, seed=seed
    )


def bootstrap_rows(seed: int, index: int, n: int) -> np.ndarray:
    """The exact bootstrap draw used for tree ``index`` (exposed for tests)."""
    return np.random.default_rng([seed, index]).integers(0, n, size=n)


def _route(tree: Tree, dense: np.ndarray) -> int:
    node = 0
    while tree.feature[node] >= 0:
        if dense[tree.feature[node]] <= tree.threshold[node]:
            node = int(tree.left[node])
        else:
            node = int(tree.right[node])
    return int(tree.label[node])


def tree_votes(model: ForestModel, x: FeatureVector) -> np.ndarray:
    if x.dimension != model.vocabulary.size:
        raise DimensionMismatch(
            f"feature dimension {x.dimension} != model dimension {model.vocabulary.size}"
        )
    dense = np.zeros(x.dimension)
    dense[x.indices] = x.weights
    votes = np.zeros(len(model.classes), dtype=np.int64)
    for tree in model.trees:
        votes[_route(tree, dense)] += 1
    return votes


def predict_forest(model: ForestModel, x: FeatureVector) -> str:
    """Plurality vote over trees; ties go to the lexicographically smallest label."""
    votes = tree_votes(model, x)
    return model.classes[int(np.argmax(votes))]


def predict_forest_query(model: ForestModel, query: str) -> str:
    return predict_forest(model, featurize(model.vocabulary, query))

import numpy as np
import pytest
from scipy import sparse

from geocmd.datagen import Sample
from geocmd.features import Vocabulary, featurize
from geocmd.svm import (
    DimensionMismatch,
    SingleClassTraining,
    SvmModel,
    gradient,
    objective,
    predict_svm,
    predict_svm_query,
    train_svm,
)


def _samples(pairs):
    return [Sample(i, fn, q, f"{fn}(1)") for i, (fn, q) in enumerate(pairs)]


def test_separable_two_points():
    train = _samples([("ZoomIn", "alpha"), ("ZoomOut", "beta")])
    model = train_svm(train, seed=0)
    assert predict_svm_query(model, "alpha") == "ZoomIn"
    assert predict_svm_query(model, "beta") == "ZoomOut"


def test_single_class_rejected():
    with pytest.raises(SingleClassTraining):
        train_svm(_samples([("ZoomIn", "alpha"), ("ZoomIn", "beta")]))


def test_objective_history_non_increasing():
    train = _samples(
        [
            ("ZoomIn", "zoom in by 3"),
            ("ZoomIn", "zoom in closer"),
            ("ZoomOut", "zoom out wider"),
            ("ZoomOut", "zoom out by 2"),
            ("Move", "go to 1, 2"),
            ("Move", "pan to 3, 4"),
        ]
    )
    model = train_svm(train, seed=0)
    for history in model.objective_history:
        assert len(history) >= 2
        for before, after in zip(history, history[1:]):
            assert after <= before + 1e-9


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(12)
    x = sparse.csr_matrix(rng.normal(size=(10, 5)))
    y = np.where(rng.random(10) < 0.5, 1.0, -1.0)
    w = rng.normal(scale=0.3, size=5)
    b = float(rng.normal(scale=0.3))
    # Stay away from the hinge's kink so central differences are clean.
    margins = 1.0 - y * (x @ w + b)
    assert np.all(np.abs(margins) > 1e-3)
    grad_w, grad_b = gradient(w, b, x, y, c=1.0)
    eps = 1e-6
    for i in range(5):
        bump = np.zeros(5)
        bump[i] = eps
        fd = (objective(w + bump, b, x, y, 1.0) - objective(w - bump, b, x, y, 1.0)) / (2 * eps)
        assert abs(fd - grad_w[i]) / max(abs(fd), 1e-12) < 1e-4
    fd_b = (objective(w, b + eps, x, y, 1.0) - objective(w, b - eps, x, y, 1.0)) / (2 * eps)
    assert abs(fd_b - grad_b) / max(abs(fd_b), 1e-12) < 1e-4


def test_objective_value_definition():
    # One sample, one feature: w=0, b=0 gives J = C * 1^2.
    x = sparse.csr_matrix(np.array([[2.0]]))
    y = np.array([1.0])
    assert objective(np.zeros(1), 0.0, x, y, c=3.0) == pytest.approx(3.0)
    # w=1, b=0: margin = 1 - 2 = -1 -> no violation; J = 0.5.
    assert objective(np.ones(1), 0.0, x, y, c=3.0) == pytest.approx(0.5)


def _toy_model(weights, biases, classes):
    vocab = Vocabulary({"alpha": 0, "beta": 1}, np.ones(2), n_docs=2)
    return SvmModel(
        classes=classes,
        vocabulary=vocab,
        weights=np.array(weights, dtype=float),
        biases=np.array(biases, dtype=float),
        c=1.0,
        tol=1e-4,
        max_iter=1000,
        seed=0,
    )


def test_predict_hand_computed_decision_values():
    model = _toy_model([[0.9, 0.0], [-0.3, 0.0]], [0.0, 0.0], ["ZoomIn", "ZoomOut"])
    vec = featurize(model.vocabulary, "alpha")
    # w_1 . x + b_1 = 0.9, w_2 . x + b_2 = -0.3 -> first class.
    assert predict_svm(model, vec) == "ZoomIn"


def test_predict_tie_breaks_to_lowest_class_index():
    model = _toy_model([[0.0, 0.0], [0.0, 0.0]], [0.0, 0.0], ["ZoomIn", "ZoomOut"])
    vec = featurize(model.vocabulary, "alpha beta")
    assert predict_svm(model, vec) == "ZoomIn"


def test_predict_dimension_mismatch():
    model = _toy_model([[0.1, 0.2]], [0.0], ["ZoomIn"])
    other_vocab = Vocabulary({"a": 0, "b": 1, "c": 2}, np.ones(3), n_docs=1)
    with pytest.raises(DimensionMismatch):
        predict_svm(model, featurize(other_vocab, "a b c"))


def test_training_is_deterministic():
    train = _samples(
        [
            ("ZoomIn", "zoom in by 3"),
            ("ZoomOut", "zoom out wider"),
            ("Move", "go to 1, 2"),
            ("Move", "pan to 3, 4"),
        ]
    )
    first = train_svm(train, seed=5)
    second = train_svm(train, seed=5)
    assert np.array_equal(first.weights, second.weights)
    assert np.array_equal(first.biases, second.biases)
    assert first.objective_history == second.objective_history


def test_classes_are_sorted():
    train = _samples([("ZoomOut", "beta"), ("AddLayer", "gamma"), ("Move", "alpha")])
    model = train_svm(train)
    assert model.classes == ["AddLayer", "Move", "ZoomOut"]

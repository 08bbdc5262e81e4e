import math

import numpy as np
import pytest

from matchflow import classifier
from matchflow.classifier import SoftmaxModel, TrainConfig, nll_and_grad, sigmoid, softmax, train
from matchflow.errors import DataError
from matchflow.ingest import FeatureTable
from matchflow.labels import ClassLabel


def test_sigmoid_basics():
    assert sigmoid(0.0) == 0.5
    assert abs(sigmoid(40.0) - 1.0) <= 1e-12
    for z in (-3.0, 0.7, 12.0):
        assert sigmoid(z) + sigmoid(-z) == pytest.approx(1.0, abs=1e-12)


def test_sigmoid_stable_at_extremes():
    assert sigmoid(700.0) == 1.0
    assert sigmoid(-700.0) == pytest.approx(0.0, abs=1e-300)
    out = sigmoid(np.array([-700.0, 0.0, 700.0]))
    assert np.all(np.isfinite(out))


def separable_fixture():
    # two clusters in two features, labels by cluster
    x = np.array(
        [[1.0, 1.2], [0.8, 1.1], [1.1, 0.9], [0.9, 1.0], [1.2, 1.3],
         [-1.0, -0.8], [-1.2, -1.1], [-0.9, -1.0], [-1.1, -1.2], [-0.8, -0.9]]
    )
    y = [0] * 5 + [1] * 5
    return FeatureTable("toy", ["a", "b"], x), y


def test_separable_toy_reaches_perfect_train_accuracy():
    table, y = separable_fixture()
    model = train(table, y, TrainConfig(max_iters=200))
    pred = model.predict(table.values)
    assert np.array_equal(pred, np.array(y))
    # each row keeps its constructed label
    for row, label in zip(table.values, y):
        assert model.predict(row) == label


def test_degenerate_labels_error():
    table, _ = separable_fixture()
    with pytest.raises(DataError, match="degenerate"):
        train(table, [0] * 10, TrainConfig(), class_values=(0.0, 1.0))


def test_zero_iterations_uniform_four_class():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(12, 3))
    y = [0, 1, 2, 3] * 3
    model = train(FeatureTable("t", list("abc"), x), y, TrainConfig(max_iters=0))
    proba = model.predict_proba(x)
    assert np.allclose(proba, 0.25)
    assert model.n_iters == 0


def test_zero_coefficients_uniform_and_tie_break():
    model = SoftmaxModel(
        class_values=(0.0, 0.3, 0.7, 1.0),
        coef=np.zeros((3, 3)),
        feature_names=["a", "b"],
        mean=np.zeros(2),
        std=np.ones(2),
    )
    proba = model.predict_proba(np.array([3.0, -2.0]))
    assert np.allclose(proba, 0.25)
    assert model.predict(np.array([3.0, -2.0])) == 0  # exact tie -> lowest index


def test_three_class_zero_exponents_give_thirds():
    model = SoftmaxModel(
        class_values=(0.0, 0.5, 1.0),
        coef=np.zeros((2, 2)),
        feature_names=["x"],
        mean=np.zeros(1),
        std=np.ones(1),
    )
    proba = model.predict_proba(np.array([1.234]))
    assert np.allclose(proba, 1.0 / 3.0)


def intercept_only_model(probabilities):
    """Model with no features whose output is a fixed distribution."""
    p = np.asarray(probabilities, dtype=float)
    scores = np.log(p[:-1] / p[-1])
    return SoftmaxModel(
        class_values=(0.0, 0.3266, 0.6734, 1.0),
        coef=scores[:, None],
        feature_names=[],
        mean=np.zeros(0),
        std=np.ones(0),
    )


def test_published_style_probability_row_selects_the_break_class():
    probs = [7.19e-15, 0.859431, 9.17e-23, 0.140568]
    model = intercept_only_model(probs)
    out = model.predict_proba(np.zeros(0))
    assert np.allclose(out, np.array(probs) / sum(probs), rtol=1e-9)
    level = model.predict(np.zeros(0))
    assert level == 1
    assert model.class_values[level] == 0.3266


def test_argmax_tie_breaks_to_lowest_index():
    assert int(np.argmax([0.25, 0.25, 0.25, 0.25])) == 0
    assert int(np.argmax([0.1, 0.7, 0.1, 0.1])) == 1


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(123)
    for _ in range(20):
        x = rng.normal(size=(5, 3))
        design = np.hstack([np.ones((5, 1)), x])
        y = rng.integers(0, 4, size=5)
        y[0] = 3  # keep the reference class present
        coef = rng.normal(scale=0.5, size=(3, 4))
        _, grad = nll_and_grad(coef, design, y, 4)
        fd = np.zeros_like(coef)
        h = 1e-5
        for i in range(coef.shape[0]):
            for j in range(coef.shape[1]):
                up = coef.copy()
                up[i, j] += h
                down = coef.copy()
                down[i, j] -= h
                fd[i, j] = (nll_and_grad(up, design, y, 4)[0] - nll_and_grad(down, design, y, 4)[0]) / (2 * h)
        rel = np.linalg.norm(grad - fd) / max(1.0, np.linalg.norm(grad))
        assert rel <= 1e-5


def test_training_loss_is_monotone_in_iteration_budget():
    rng = np.random.default_rng(5)
    x = rng.normal(size=(40, 3))
    y = rng.integers(0, 4, size=40)
    y[:4] = [0, 1, 2, 3]
    table = FeatureTable("t", list("abc"), x)
    losses = [
        train(table, y, TrainConfig(max_iters=m)).final_loss for m in (0, 5, 20, 80)
    ]
    assert losses[0] == pytest.approx(math.log(4.0))
    assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))


def test_probability_simplex_property():
    rng = np.random.default_rng(9)
    for _ in range(50):
        coef = rng.normal(scale=5.0, size=(3, 5))
        model = SoftmaxModel(
            class_values=(0.0, 0.3, 0.7, 1.0),
            coef=coef,
            feature_names=list("abcd"),
            mean=np.zeros(4),
            std=np.ones(4),
        )
        proba = model.predict_proba(rng.normal(scale=3.0, size=(10, 4)))
        assert np.all(proba >= 0.0)
        assert np.allclose(proba.sum(axis=1), 1.0, atol=1e-9)


def test_softmax_shift_invariance():
    # adding one constant to every class score of a sample cannot move it
    rng = np.random.default_rng(4)
    scores = rng.normal(size=(6, 4))
    shift = rng.normal(size=(6, 1))
    assert np.allclose(softmax(scores), softmax(scores + shift), atol=1e-12)


def test_dimension_mismatch_raises():
    table, y = separable_fixture()
    model = train(table, y, TrainConfig(max_iters=10))
    with pytest.raises(ValueError, match="dimension"):
        model.predict_proba(np.zeros(5))


def test_divergent_input_raises():
    x = np.array([[1.0, np.inf], [0.0, 1.0], [1.0, 2.0], [3.0, 1.0]])
    with pytest.raises(ArithmeticError, match="divergence"):
        train(FeatureTable("t", ["a", "b"], x), [0, 1, 0, 1], TrainConfig(max_iters=5))


def test_training_accepts_class_labels():
    table, y = separable_fixture()
    labs = [ClassLabel(level, float(level)) for level in y]
    model = train(table, labs, TrainConfig(max_iters=50))
    assert model.class_values == (0.0, 1.0)


def test_training_is_deterministic():
    table, y = separable_fixture()
    a = train(table, y, TrainConfig(max_iters=60, seed=3)).to_dict()
    b = train(table, y, TrainConfig(max_iters=60, seed=3)).to_dict()
    assert a == b


def test_model_json_round_trip(tmp_path):
    table, y = separable_fixture()
    model = train(table, y, TrainConfig(max_iters=30))
    path = tmp_path / "model.json"
    classifier.save_model(model, path)
    loaded = classifier.load_model(path)
    rows = np.array([[0.3, -0.2], [1.0, 1.0]])
    assert np.allclose(model.predict_proba(rows), loaded.predict_proba(rows))


def test_train_test_split_stratified_and_deterministic():
    y = [0] * 10 + [1] * 6 + [2] * 4
    a_train, a_test = classifier.train_test_split(y, fraction=0.8, seed=2)
    b_train, b_test = classifier.train_test_split(y, fraction=0.8, seed=2)
    assert np.array_equal(a_train, b_train) and np.array_equal(a_test, b_test)
    assert set(a_train.tolist()) | set(a_test.tolist()) == set(range(20))
    assert not set(a_train.tolist()) & set(a_test.tolist())
    labels_arr = np.array(y)
    for side in (a_train, a_test):
        assert set(labels_arr[side].tolist()) == {0, 1, 2}


def test_train_config_validation():
    with pytest.raises(DataError):
        TrainConfig(learning_rate=-1.0).validate()
    with pytest.raises(DataError):
        TrainConfig(split=1.5).validate()
    with pytest.raises(DataError):
        TrainConfig(tol=0.0).validate()

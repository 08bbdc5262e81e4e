"""Multi-class logistic regression with a reference class.

K-1 coefficient rows score the non-reference classes against the last class,
whose score is pinned at zero; class probabilities are the softmax of those
scores.  Training maximizes the log-likelihood by batch gradient descent with
a backtracking line search, from an all-zeros start, so a run is fully
deterministic and max_iters=0 yields exactly uniform predictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

MAX_BACKTRACKS = 60


def sigmoid(z):
    """Logistic function 1/(1+e^-z), stable for |z| up to ~700."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out) if out.ndim == 0 else out


def softmax(scores):
    """Row-wise softmax of a score matrix (n, K)."""
    scores = np.asarray(scores, dtype=float)
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class TrainConfig:
    learning_rate: float = 1.0
    max_iters: int = 500
    tol: float = 1e-6
    l2_penalty: float = 0.0
    seed: int = 0
    split: float = 0.8  # train fraction used by callers that hold out a test split

    def validate(self):
        if self.learning_rate <= 0:
            raise DataError("learning_rate must be positive")
        if self.max_iters < 0:
            raise DataError("max_iters must be >= 0")
        if self.tol <= 0:
            raise DataError("tol must be positive")
        if self.l2_penalty < 0:
            raise DataError("l2_penalty must be >= 0")
        if not (0.0 < self.split < 1.0):
            raise DataError("split must be in (0, 1)")


@dataclass
class SoftmaxModel:
    """Trained classifier: (K-1) x (p+1) coefficients, intercept first.

    The last class in class_values is the reference class with implicit zero
    score.  Inputs are standardized with the stored per-feature mean/std
    before scoring.  Instances are immutable in practice and safe to share
    across threads.
    """

    class_values: tuple
    coef: np.ndarray
    feature_names: list
    mean: np.ndarray
    std: np.ndarray
    n_iters: int = 0
    final_loss: float = float("nan")
    converged: bool = False
    seed: int = 0

    @property
    def n_classes(self) -> int:
        return len(self.class_values)

    @property
    def n_features(self) -> int:
        return self.coef.shape[1] - 1

    def _design(self, rows):
        rows = np.asarray(rows, dtype=float)
        single = rows.ndim == 1
        if single:
            rows = rows[None, :]
        if rows.shape[1] != self.n_features:
            raise ValueError(
                f"feature dimension mismatch: expected {self.n_features}, got {rows.shape[1]}"
            )
        z = (rows - self.mean) / self.std
        return np.hstack([np.ones((z.shape[0], 1)), z]), single

    def predict_proba(self, rows):
        """Class probability vector(s); components sum to one."""
        design, single = self._design(rows)
        scores = np.hstack([design @ self.coef.T, np.zeros((design.shape[0], 1))])
        proba = softmax(scores)
        return proba[0] if single else proba

    def predict(self, rows):
        """Most probable class level(s); ties go to the lowest class index."""
        proba = np.atleast_2d(self.predict_proba(rows))
        levels = np.argmax(proba, axis=1)  # argmax takes the first maximum
        return int(levels[0]) if np.asarray(rows).ndim == 1 else levels

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "class_values": list(self.class_values),
            "coefficients": self.coef.tolist(),
            "feature_names": list(self.feature_names),
            "standardization": {"mean": self.mean.tolist(), "std": self.std.tolist()},
            "training": {
                "iterations": self.n_iters,
                "final_loss": self.final_loss,
                "converged": self.converged,
                "seed": self.seed,
            },
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SoftmaxModel":
        return cls(
            class_values=tuple(payload["class_values"]),
            coef=np.asarray(payload["coefficients"], dtype=float),
            feature_names=list(payload["feature_names"]),
            mean=np.asarray(payload["standardization"]["mean"], dtype=float),
            std=np.asarray(payload["standardization"]["std"], dtype=float),
            n_iters=payload["training"]["iterations"],
            final_loss=payload["training"]["final_loss"],
            converged=payload["training"]["converged"],
            seed=payload["training"]["seed"],
        )


def _as_matrix(features):
    if hasattr(features, "values") and hasattr(features, "feature_names"):
        return np.asarray(features.values, dtype=float), list(features.feature_names)
    x = np.asarray(features, dtype=float)
    return x, [f"x{i}" for i in range(x.shape[1])]


def _as_levels(labels, class_values):
    levels = []
    values = {}
    for item in labels:
        if hasattr(item, "level"):
            levels.append(int(item.level))
            values[int(item.level)] = float(item.value)
        else:
            levels.append(int(item))
    y = np.asarray(levels, dtype=int)
    if class_values is None:
        if values:
            k = max(values) + 1
            class_values = tuple(values.get(i, float(i)) for i in range(k))
        else:
            class_values = tuple(float(i) for i in range(int(y.max()) + 1))
    return y, tuple(class_values)


def nll_and_grad(coef, design, y, n_classes, l2_penalty=0.0):
    """Mean negative log-likelihood and its gradient w.r.t. the coefficients.

    coef has shape (K-1, p+1), design (n, p+1) with the intercept column
    first, y holds class levels in [0, K).  The L2 penalty skips intercepts.
    """
    n = design.shape[0]
    scores = np.hstack([design @ coef.T, np.zeros((n, 1))])
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1)) + scores.max(axis=1)
    loss = float(np.mean(log_z - scores[np.arange(n), y]))
    proba = softmax(scores)
    delta = proba[:, : n_classes - 1].copy()
    one_hot = y < n_classes - 1
    delta[np.arange(n)[one_hot], y[one_hot]] -= 1.0
    grad = delta.T @ design / n
    if l2_penalty:
        penalty = coef.copy()
        penalty[:, 0] = 0.0
        loss += 0.5 * l2_penalty * float(np.sum(penalty**2))
        grad = grad + l2_penalty * penalty
    return loss, grad


def train(features, labels, cfg: TrainConfig | None = None, class_values=None) -> SoftmaxModel:
    """Fit the softmax classifier by gradient descent with backtracking.

    Features are standardized with the statistics of the data passed in (the
    caller's training split).  Every class must appear at least once.

    Raises:
        DataError: a class is absent from the labels (degenerate labels).
        ArithmeticError: loss went non-finite (divergence).
    """
    cfg = cfg or TrainConfig()
    cfg.validate()
    x, feature_names = _as_matrix(features)
    if not np.all(np.isfinite(x)):
        raise ArithmeticError("divergence: features contain non-finite values")
    y, class_values = _as_levels(labels, class_values)
    if x.shape[0] != y.size:
        raise ValueError("features and labels disagree on sample count")
    k = len(class_values)
    present = np.unique(y)
    if len(present) < k:
        missing = sorted(set(range(k)) - set(present.tolist()))
        raise DataError(f"degenerate labels: class level(s) {missing} absent from training data")

    mean = x.mean(axis=0)
    std = x.std(axis=0)
    std[std == 0.0] = 1.0
    design = np.hstack([np.ones((x.shape[0], 1)), (x - mean) / std])

    coef = np.zeros((k - 1, design.shape[1]))
    loss, grad = nll_and_grad(coef, design, y, k, cfg.l2_penalty)
    if not np.isfinite(loss):
        raise ArithmeticError("divergence: training loss is not finite")
    iters = 0
    converged = float(np.linalg.norm(grad)) <= cfg.tol
    while not converged and iters < cfg.max_iters:
        step = cfg.learning_rate
        accepted = False
        for _ in range(MAX_BACKTRACKS):
            candidate = coef - step * grad
            new_loss, new_grad = nll_and_grad(candidate, design, y, k, cfg.l2_penalty)
            if np.isfinite(new_loss) and new_loss <= loss:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            if not np.isfinite(new_loss):
                raise ArithmeticError("divergence: training loss is not finite")
            break  # no descent possible at float precision
        coef, loss, grad = candidate, new_loss, new_grad
        iters += 1
        converged = float(np.linalg.norm(grad)) <= cfg.tol

    return SoftmaxModel(
        class_values=class_values,
        coef=coef,
        feature_names=feature_names,
        mean=mean,
        std=std,
        n_iters=iters,
        final_loss=loss,
        converged=converged,
        seed=cfg.seed,
    )


def train_test_split(labels, fraction=0.8, seed=0):
    """Stratified index split: (train_idx, test_idx), deterministic per seed.

    Every class keeps at least one sample on each side whenever it has two.
    """
    y, _ = _as_levels(labels, None)
    rng = np.random.default_rng(seed)
    train_idx, test_idx = [], []
    for level in np.unique(y):
        idx = np.flatnonzero(y == level)
        idx = idx[rng.permutation(idx.size)]
        n_train = int(round(fraction * idx.size))
        n_train = min(max(n_train, 1), idx.size - 1) if idx.size > 1 else idx.size
        train_idx.extend(idx[:n_train].tolist())
        test_idx.extend(idx[n_train:].tolist())
    return np.array(sorted(train_idx), dtype=int), np.array(sorted(test_idx), dtype=int)


def save_model(model: SoftmaxModel, path):
    with open(path, "w") as fh:
        json.dump(model.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> SoftmaxModel:
    with open(path) as fh:
        return SoftmaxModel.from_dict(json.load(fh))

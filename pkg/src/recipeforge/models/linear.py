"""Softmax regression and one-vs-rest linear SVM, trained by mini-batch
(sub)gradient descent with warmup/decay scheduling and decoupled weight
decay (applied to weights, not biases)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .common import (
    N_GENRES,
    TrainConfig,
    iter_batches,
    learning_rate_schedule,
    one_hot,
    softmax,
)

SOFTMAX_REGRESSION = "softmax_regression"
OVR_HINGE = "ovr_hinge"


@dataclass
class LinearModel:
    weights: np.ndarray  # (9, F)
    bias: np.ndarray  # (9,)
    kind: str
    rate_log: list[float] = field(default_factory=list, repr=False)
    epoch_losses: list[float] = field(default_factory=list, repr=False)

    @property
    def n_features(self) -> int:
        return self.weights.shape[1]


def decision_scores(model: LinearModel, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"feature dimension {X.shape[1]} does not match model "
            f"({model.n_features})"
        )
    return X @ model.weights.T + model.bias


def predict_proba_linear(model: LinearModel, X: np.ndarray) -> np.ndarray:
    """Softmax over scores.  For the hinge model these are calibration-free
    scores, reported as probabilities only for ranking and averaging."""
    return softmax(decision_scores(model, X), axis=1)


def ce_loss_and_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, Y: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean categorical cross-entropy over one-hot targets Y."""
    scores = X @ W.T + b
    shifted = scores - scores.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_z
    n = len(X)
    loss = -float((Y * log_probs).sum()) / n
    delta = (np.exp(log_probs) - Y) / n
    return loss, delta.T @ X, delta.sum(axis=0)


def hinge_loss_and_grad(
    W: np.ndarray, b: np.ndarray, X: np.ndarray, T: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """One-vs-rest hinge: T holds +/-1 targets per class; the loss is the
    per-class mean hinge summed over classes, so each binary problem trains
    independently."""
    scores = X @ W.T + b
    margins = 1.0 - T * scores
    active = margins > 0
    n = len(X)
    loss = float(margins[active].sum()) / n
    coeff = np.where(active, -T, 0.0) / n
    return loss, coeff.T @ X, coeff.sum(axis=0)


def _run_gd(
    X: np.ndarray,
    target: np.ndarray,
    loss_and_grad,
    cfg: TrainConfig,
    kind: str,
) -> LinearModel:
    n, F = X.shape
    W = np.zeros((N_GENRES, F), dtype=np.float64)
    b = np.zeros(N_GENRES, dtype=np.float64)
    rng = np.random.default_rng(cfg.seed)
    steps_per_epoch = -(-n // cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    rates = learning_rate_schedule(
        total_steps, cfg.learning_rate, cfg.warmup_fraction
    )
    rate_log: list[float] = []
    epoch_losses: list[float] = []
    step = 0
    for _ in range(cfg.epochs):
        epoch_loss = 0.0
        for batch in iter_batches(n, cfg.batch_size, rng):
            loss, gW, gb = loss_and_grad(W, b, X[batch], target[batch])
            if not np.isfinite(loss):
                raise FloatingPointError(
                    f"non-finite loss at step {step + 1}; try a lower "
                    f"learning rate than {cfg.learning_rate}"
                )
            rate = rates[step]
            W -= rate * gW
            W -= rate * cfg.weight_decay * W
            b -= rate * gb
            rate_log.append(float(rate))
            epoch_loss += loss * len(batch)
            step += 1
        epoch_losses.append(epoch_loss / n)
    return LinearModel(
        weights=W, bias=b, kind=kind,
        rate_log=rate_log, epoch_losses=epoch_losses,
    )


def train_logreg(
    X: np.ndarray, labels: np.ndarray, cfg: TrainConfig | None = None
) -> LinearModel:
    X = np.asarray(X, dtype=np.float64)
    if len(X) == 0:
        raise ValueError("empty training set")
    cfg = cfg or TrainConfig()
    Y = one_hot(np.asarray(labels, dtype=np.int64))
    return _run_gd(X, Y, ce_loss_and_grad, cfg, SOFTMAX_REGRESSION)


def train_svm(
    X: np.ndarray, labels: np.ndarray, cfg: TrainConfig | None = None
) -> LinearModel:
    X = np.asarray(X, dtype=np.float64)
    if len(X) == 0:
        raise ValueError("empty training set")
    cfg = cfg or TrainConfig()
    T = one_hot(np.asarray(labels, dtype=np.int64)) * 2.0 - 1.0
    return _run_gd(X, T, hinge_loss_and_grad, cfg, OVR_HINGE)

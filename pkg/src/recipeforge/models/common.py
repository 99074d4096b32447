"""Shared training machinery: config, learning-rate schedule, decisions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N_GENRES = 9


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    batch_size: int = 128
    epochs: int = 10
    warmup_fraction: float = 0.2
    weight_decay: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0 <= self.warmup_fraction < 1:
            raise ValueError("warmup_fraction must lie in [0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")


# The neural model keeps the fine-tuning-scale default rate; it is far too
# small for the from-scratch linear models, which default to 0.1.
MLP_DEFAULT_CONFIG = TrainConfig(learning_rate=1e-5)


def learning_rate_schedule(
    total_steps: int, peak: float, warmup_fraction: float
) -> np.ndarray:
    """Per-step rates: linear warmup 0 -> peak over the first
    warmup_fraction of steps, then linear decay to 0 at the final step."""
    if total_steps <= 0:
        return np.zeros(0, dtype=np.float64)
    warmup_steps = int(warmup_fraction * total_steps)
    steps = np.arange(1, total_steps + 1, dtype=np.float64)
    rates = np.empty(total_steps, dtype=np.float64)
    if warmup_steps > 0:
        mask = steps <= warmup_steps
        rates[mask] = peak * steps[mask] / warmup_steps
    else:
        mask = np.zeros(total_steps, dtype=bool)
    decay_span = total_steps - warmup_steps
    rates[~mask] = peak * (total_steps - steps[~mask]) / decay_span
    return rates


def softmax(scores: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = scores - np.max(scores, axis=axis, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=axis, keepdims=True)


def one_hot(labels: np.ndarray, n_classes: int = N_GENRES) -> np.ndarray:
    """Labels are genre ids 1..9; columns are genre id - 1."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 1 or labels.max() > n_classes):
        raise ValueError(f"labels must lie in 1..{n_classes}")
    out = np.zeros((len(labels), n_classes), dtype=np.float64)
    out[np.arange(len(labels)), labels - 1] = 1.0
    return out


def predict_genre(scores: np.ndarray) -> int:
    """Argmax genre id over a 9-vector; ties break toward the lowest id."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (N_GENRES,):
        raise ValueError(f"expected {N_GENRES} scores, got shape {scores.shape}")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return int(np.argmax(scores)) + 1


def predict_genres(probas: np.ndarray) -> np.ndarray:
    """Row-wise argmax genre ids for an (n, 9) score matrix."""
    probas = np.asarray(probas, dtype=np.float64)
    if probas.ndim != 2 or probas.shape[1] != N_GENRES:
        raise ValueError(f"expected (n, {N_GENRES}) scores")
    if not np.all(np.isfinite(probas)):
        raise ValueError("scores must be finite")
    return np.argmax(probas, axis=1) + 1


def iter_batches(
    n: int, batch_size: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """One epoch's batch index lists under a seeded shuffle."""
    order = rng.permutation(n)
    return [order[i : i + batch_size] for i in range(0, n, batch_size)]

"""Feedforward classifier over embedded token sequences.

Forward pass: mean of non-[PAD] embeddings, rectifier hidden layers, nine
logits, softmax.  Gradients are analytic throughout so they can be checked
against finite differences.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..features import PAD_ID
from .common import (
    N_GENRES,
    MLP_DEFAULT_CONFIG,
    TrainConfig,
    iter_batches,
    learning_rate_schedule,
    one_hot,
    softmax,
)

logger = logging.getLogger(__name__)


@dataclass
class MlpModel:
    embedding: np.ndarray  # (V, d)
    hidden_weights: list[np.ndarray]  # (in, out) per layer
    hidden_biases: list[np.ndarray]
    output_weights: np.ndarray  # (h_last, 9)
    output_bias: np.ndarray  # (9,)
    rate_log: list[float] = field(default_factory=list, repr=False)
    epoch_losses: list[float] = field(default_factory=list, repr=False)

    @property
    def vocab_size(self) -> int:
        return self.embedding.shape[0]

    @property
    def embedding_dim(self) -> int:
        return self.embedding.shape[1]

    @property
    def hidden_sizes(self) -> list[int]:
        return [w.shape[1] for w in self.hidden_weights]

    def parameters(self) -> list[np.ndarray]:
        return (
            [self.embedding]
            + self.hidden_weights
            + self.hidden_biases
            + [self.output_weights, self.output_bias]
        )


def init_mlp(
    vocab_size: int,
    embedding_dim: int = 64,
    hidden_sizes: tuple[int, ...] = (128,),
    seed: int = 0,
) -> MlpModel:
    """Seeded init; the output layer starts at zero so an untrained model
    predicts exactly uniform probabilities."""
    rng = np.random.default_rng(seed)
    embedding = rng.normal(0.0, 0.02, size=(vocab_size, embedding_dim))
    hidden_weights = []
    hidden_biases = []
    fan_in = embedding_dim
    for size in hidden_sizes:
        hidden_weights.append(
            rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, size))
        )
        hidden_biases.append(np.zeros(size, dtype=np.float64))
        fan_in = size
    return MlpModel(
        embedding=embedding,
        hidden_weights=hidden_weights,
        hidden_biases=hidden_biases,
        output_weights=np.zeros((fan_in, N_GENRES), dtype=np.float64),
        output_bias=np.zeros(N_GENRES, dtype=np.float64),
    )


def _pool_embeddings(
    model: MlpModel, seqs: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mask = (seqs != PAD_ID).astype(np.float64)
    counts = mask.sum(axis=1)
    if np.any(counts == 0):
        logger.warning(
            "all-[PAD] sequence pooled to the zero vector; prediction will "
            "be uniform"
        )
    safe = np.maximum(counts, 1.0)
    pooled = (model.embedding[seqs] * mask[:, :, None]).sum(axis=1)
    pooled /= safe[:, None]
    return pooled, mask, safe


def _forward(
    model: MlpModel, seqs: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray], np.ndarray, np.ndarray, np.ndarray]:
    pooled, mask, counts = _pool_embeddings(model, seqs)
    activations = [pooled]
    for W, b in zip(model.hidden_weights, model.hidden_biases):
        activations.append(np.maximum(activations[-1] @ W + b, 0.0))
    logits = activations[-1] @ model.output_weights + model.output_bias
    return logits, activations, pooled, mask, counts


def predict_proba_mlp(model: MlpModel, seqs: np.ndarray) -> np.ndarray:
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.int64))
    logits, *_ = _forward(model, seqs)
    return softmax(logits, axis=1)


def loss_and_grads(
    model: MlpModel, seqs: np.ndarray, Y: np.ndarray
) -> tuple[float, dict[str, object]]:
    """Mean cross-entropy and analytic gradients for every parameter."""
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.int64))
    logits, activations, _, mask, counts = _forward(model, seqs)
    n = len(seqs)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    log_probs = shifted - log_z
    loss = -float((Y * log_probs).sum()) / n

    delta = (np.exp(log_probs) - Y) / n
    g_out_w = activations[-1].T @ delta
    g_out_b = delta.sum(axis=0)
    g_hidden_w: list[np.ndarray] = [None] * len(model.hidden_weights)
    g_hidden_b: list[np.ndarray] = [None] * len(model.hidden_biases)
    upstream = delta @ model.output_weights.T
    for layer in reversed(range(len(model.hidden_weights))):
        dz = upstream * (activations[layer + 1] > 0)
        g_hidden_w[layer] = activations[layer].T @ dz
        g_hidden_b[layer] = dz.sum(axis=0)
        upstream = dz @ model.hidden_weights[layer].T
    g_embedding = np.zeros_like(model.embedding)
    per_position = upstream[:, None, :] * (mask / counts[:, None])[:, :, None]
    np.add.at(g_embedding, seqs.reshape(-1),
              per_position.reshape(-1, model.embedding_dim))
    return loss, {
        "embedding": g_embedding,
        "hidden_weights": g_hidden_w,
        "hidden_biases": g_hidden_b,
        "output_weights": g_out_w,
        "output_bias": g_out_b,
    }


def train_mlp(
    seqs: np.ndarray,
    labels: np.ndarray,
    cfg: TrainConfig | None = None,
    embedding_dim: int = 64,
    hidden_sizes: tuple[int, ...] = (128,),
    vocab_size: int | None = None,
) -> MlpModel:
    """Mini-batch gradient descent with the warmup/decay schedule and
    decoupled weight decay on the weight matrices."""
    seqs = np.atleast_2d(np.asarray(seqs, dtype=np.int64))
    labels = np.asarray(labels, dtype=np.int64)
    if len(seqs) == 0:
        raise ValueError("empty training set")
    cfg = cfg or MLP_DEFAULT_CONFIG
    if vocab_size is None:
        vocab_size = int(seqs.max()) + 1
    model = init_mlp(vocab_size, embedding_dim, hidden_sizes, seed=cfg.seed)
    Y = one_hot(labels)
    n = len(seqs)
    rng = np.random.default_rng(cfg.seed)
    steps_per_epoch = -(-n // cfg.batch_size)
    total_steps = cfg.epochs * steps_per_epoch
    rates = learning_rate_schedule(
        total_steps, cfg.learning_rate, cfg.warmup_fraction
    )
    step = 0
    for _ in range(cfg.epochs):
        epoch_loss = 0.0
        for batch in iter_batches(n, cfg.batch_size, rng):
            loss, grads = loss_and_grads(model, seqs[batch], Y[batch])
            if not np.isfinite(loss):
                raise FloatingPointError(
                    f"non-finite loss at step {step + 1}; try a lower "
                    f"learning rate than {cfg.learning_rate}"
                )
            rate = rates[step]
            decay = rate * cfg.weight_decay
            model.embedding -= rate * grads["embedding"]
            model.embedding -= decay * model.embedding
            for layer in range(len(model.hidden_weights)):
                model.hidden_weights[layer] -= (
                    rate * grads["hidden_weights"][layer]
                )
                model.hidden_weights[layer] -= decay * model.hidden_weights[layer]
                model.hidden_biases[layer] -= rate * grads["hidden_biases"][layer]
            model.output_weights -= rate * grads["output_weights"]
            model.output_weights -= decay * model.output_weights
            model.output_bias -= rate * grads["output_bias"]
            model.rate_log.append(float(rate))
            epoch_loss += loss * len(batch)
            step += 1
        model.epoch_losses.append(epoch_loss / n)
    return model

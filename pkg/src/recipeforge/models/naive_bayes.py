"""Multinomial naive Bayes with Laplace smoothing, computed in log space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import N_GENRES


@dataclass
class NaiveBayesModel:
    class_log_prior: np.ndarray  # (9,); -inf for classes absent at training
    feature_log_prob: np.ndarray  # (9, F)
    alpha: float

    @property
    def n_features(self) -> int:
        return self.feature_log_prob.shape[1]


def train_nb(
    X: np.ndarray, labels: np.ndarray, alpha: float = 1.0
) -> NaiveBayesModel:
    """Priors from class frequency; term likelihood (count + a)/(total + aF)."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(X) == 0:
        raise ValueError("empty training set")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    n, F = X.shape
    class_counts = np.zeros(N_GENRES, dtype=np.float64)
    term_counts = np.zeros((N_GENRES, F), dtype=np.float64)
    for g in range(N_GENRES):
        mask = labels == g + 1
        class_counts[g] = mask.sum()
        if class_counts[g]:
            term_counts[g] = X[mask].sum(axis=0)
    with np.errstate(divide="ignore"):
        class_log_prior = np.log(class_counts / n)
    totals = term_counts.sum(axis=1, keepdims=True)
    feature_log_prob = np.log(term_counts + alpha) - np.log(totals + alpha * F)
    return NaiveBayesModel(
        class_log_prior=class_log_prior,
        feature_log_prob=feature_log_prob,
        alpha=alpha,
    )


def predict_proba_nb(model: NaiveBayesModel, X: np.ndarray) -> np.ndarray:
    """Normalized posterior over the nine genres, per row."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"feature dimension {X.shape[1]} does not match model "
            f"({model.n_features})"
        )
    log_post = model.class_log_prior + X @ model.feature_log_prob.T
    # Classes with -inf prior stay at zero probability.
    finite = np.isfinite(model.class_log_prior)
    shifted = log_post[:, finite]
    shifted = shifted - shifted.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probas = np.zeros_like(log_post)
    probas[:, finite] = exp / exp.sum(axis=1, keepdims=True)
    return probas

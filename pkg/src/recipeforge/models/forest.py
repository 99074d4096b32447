"""Random forest over count features: CART-style Gini splits, bagging,
sqrt-F feature subsampling per split."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import N_GENRES


@dataclass
class TreeNode:
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    left: int = -1
    right: int = -1
    histogram: np.ndarray | None = None  # (9,) sample counts at a leaf


@dataclass
class DecisionTree:
    nodes: list[TreeNode]

    def leaf_histogram(self, x: np.ndarray) -> np.ndarray:
        node = self.nodes[0]
        while node.feature >= 0:
            node = self.nodes[
                node.left if x[node.feature] <= node.threshold else node.right
            ]
        return node.histogram


@dataclass
class ForestModel:
    trees: list[DecisionTree]
    n_features: int
    max_depth: int


def _gini(hist: np.ndarray) -> float:
    total = hist.sum()
    if total == 0:
        return 0.0
    p = hist / total
    return float(1.0 - (p * p).sum())


def _class_histogram(labels: np.ndarray) -> np.ndarray:
    return np.bincount(labels - 1, minlength=N_GENRES).astype(np.float64)


def _best_split(
    X: np.ndarray, labels: np.ndarray, features: np.ndarray
) -> tuple[int, float] | None:
    parent = _class_histogram(labels)
    n = len(labels)
    best = None
    best_score = _gini(parent)
    for feature in features:
        column = X[:, feature]
        order = np.argsort(column, kind="stable")
        sorted_vals = column[order]
        sorted_labels = labels[order]
        left = np.zeros(N_GENRES, dtype=np.float64)
        right = parent.copy()
        for i in range(n - 1):
            g = sorted_labels[i] - 1
            left[g] += 1
            right[g] -= 1
            if sorted_vals[i] == sorted_vals[i + 1]:
                continue
            n_left = i + 1
            score = (
                n_left * _gini(left) + (n - n_left) * _gini(right)
            ) / n
            if score < best_score - 1e-12:
                best_score = score
                threshold = (sorted_vals[i] + sorted_vals[i + 1]) / 2.0
                best = (int(feature), float(threshold))
    return best


def _grow(
    X: np.ndarray,
    labels: np.ndarray,
    indices: np.ndarray,
    depth: int,
    max_depth: int,
    n_candidates: int,
    rng: np.random.Generator,
    nodes: list[TreeNode],
) -> int:
    node_id = len(nodes)
    nodes.append(TreeNode())
    node_labels = labels[indices]
    hist = _class_histogram(node_labels)
    if (
        depth >= max_depth
        or len(indices) < 2
        or np.count_nonzero(hist) <= 1
    ):
        nodes[node_id].histogram = hist
        return node_id
    features = np.sort(
        rng.choice(X.shape[1], size=n_candidates, replace=False)
    )
    split = _best_split(X[indices], node_labels, features)
    if split is None:
        nodes[node_id].histogram = hist
        return node_id
    feature, threshold = split
    go_left = X[indices, feature] <= threshold
    nodes[node_id].feature = feature
    nodes[node_id].threshold = threshold
    nodes[node_id].left = _grow(
        X, labels, indices[go_left], depth + 1, max_depth,
        n_candidates, rng, nodes,
    )
    nodes[node_id].right = _grow(
        X, labels, indices[~go_left], depth + 1, max_depth,
        n_candidates, rng, nodes,
    )
    return node_id


def train_forest(
    X: np.ndarray,
    labels: np.ndarray,
    trees: int = 50,
    max_depth: int = 12,
    seed: int = 0,
    bootstrap: bool = True,
    feature_subsample: bool = True,
) -> ForestModel:
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if len(X) == 0:
        raise ValueError("empty training set")
    n, F = X.shape
    n_candidates = (
        max(1, int(round(np.sqrt(F)))) if feature_subsample else F
    )
    rng = np.random.default_rng(seed)
    grown: list[DecisionTree] = []
    for _ in range(trees):
        if bootstrap:
            indices = rng.integers(0, n, size=n)
        else:
            indices = np.arange(n)
        nodes: list[TreeNode] = []
        _grow(X, labels, indices, 0, max_depth, n_candidates, rng, nodes)
        grown.append(DecisionTree(nodes=nodes))
    return ForestModel(trees=grown, n_features=F, max_depth=max_depth)


def predict_proba_forest(model: ForestModel, X: np.ndarray) -> np.ndarray:
    """Mean of the trees' normalized leaf histograms."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != model.n_features:
        raise ValueError(
            f"feature dimension {X.shape[1]} does not match model "
            f"({model.n_features})"
        )
    out = np.zeros((len(X), N_GENRES), dtype=np.float64)
    for row, x in enumerate(X):
        for tree in model.trees:
            hist = tree.leaf_histogram(x)
            out[row] += hist / hist.sum()
    out /= len(model.trees)
    return out

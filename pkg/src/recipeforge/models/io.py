"""Versioned binary model container with a human-readable sidecar.

Layout: magic "RFMD", u32 version, u32 kind, u64 feature dimension, u64
genre count, then a kind-specific payload.  All integers and floats are
little-endian; floats are 64-bit.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .common import N_GENRES
from .forest import DecisionTree, ForestModel, TreeNode
from .linear import OVR_HINGE, SOFTMAX_REGRESSION, LinearModel
from .mlp import MlpModel
from .naive_bayes import NaiveBayesModel

MAGIC = b"RFMD"
VERSION = 1

KIND_NB = 1
KIND_LOGREG = 2
KIND_SVM = 3
KIND_MLP = 4
KIND_FOREST = 5

KIND_NAMES = {
    KIND_NB: "naive_bayes",
    KIND_LOGREG: "softmax_regression",
    KIND_SVM: "ovr_hinge_svm",
    KIND_MLP: "mlp",
    KIND_FOREST: "random_forest",
}

_HEADER = struct.Struct("<4sIIQQ")


def model_kind(model) -> int:
    if isinstance(model, NaiveBayesModel):
        return KIND_NB
    if isinstance(model, LinearModel):
        return KIND_LOGREG if model.kind == SOFTMAX_REGRESSION else KIND_SVM
    if isinstance(model, MlpModel):
        return KIND_MLP
    if isinstance(model, ForestModel):
        return KIND_FOREST
    raise TypeError(f"cannot serialize {type(model).__name__}")


def _floats(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def _read_floats(buf: memoryview, offset: int, count: int) -> tuple[np.ndarray, int]:
    end = offset + count * 8
    arr = np.frombuffer(buf[offset:end], dtype="<f8").copy()
    return arr, end


def save_model(model, path: str | Path) -> None:
    kind = model_kind(model)
    chunks: list[bytes] = []
    if kind == KIND_NB:
        dim = model.n_features
        chunks.append(struct.pack("<d", model.alpha))
        chunks.append(_floats(model.class_log_prior))
        chunks.append(_floats(model.feature_log_prob))
    elif kind in (KIND_LOGREG, KIND_SVM):
        dim = model.n_features
        chunks.append(_floats(model.weights))
        chunks.append(_floats(model.bias))
    elif kind == KIND_MLP:
        dim = model.vocab_size
        sizes = model.hidden_sizes
        chunks.append(struct.pack("<QQ", model.embedding_dim, len(sizes)))
        chunks.append(struct.pack(f"<{len(sizes)}Q", *sizes))
        chunks.append(_floats(model.embedding))
        for W, b in zip(model.hidden_weights, model.hidden_biases):
            chunks.append(_floats(W))
            chunks.append(_floats(b))
        chunks.append(_floats(model.output_weights))
        chunks.append(_floats(model.output_bias))
    else:
        dim = model.n_features
        chunks.append(struct.pack("<QQ", len(model.trees), model.max_depth))
        for tree in model.trees:
            chunks.append(struct.pack("<Q", len(tree.nodes)))
            for node in tree.nodes:
                hist = (
                    node.histogram
                    if node.histogram is not None
                    else np.zeros(N_GENRES)
                )
                chunks.append(
                    struct.pack(
                        "<qdqq", node.feature, node.threshold,
                        node.left, node.right,
                    )
                )
                chunks.append(_floats(hist))
    payload = b"".join(chunks)
    header = _HEADER.pack(MAGIC, VERSION, kind, dim, N_GENRES)
    Path(path).write_bytes(header + payload)
    _write_sidecar(model, kind, dim, Path(str(path) + ".summary.txt"))


def _write_sidecar(model, kind: int, dim: int, path: Path) -> None:
    lines = [
        f"kind: {KIND_NAMES[kind]}",
        f"genres: {N_GENRES}",
    ]
    if kind == KIND_NB:
        lines += [f"features: {dim}", f"alpha: {model.alpha}"]
    elif kind in (KIND_LOGREG, KIND_SVM):
        lines += [
            f"features: {dim}",
            f"parameters: {model.weights.size + model.bias.size}",
        ]
    elif kind == KIND_MLP:
        lines += [
            f"vocabulary: {dim}",
            f"embedding_dim: {model.embedding_dim}",
            f"hidden_sizes: {model.hidden_sizes}",
            f"parameters: {sum(p.size for p in model.parameters())}",
        ]
    else:
        lines += [
            f"features: {dim}",
            f"trees: {len(model.trees)}",
            f"max_depth: {model.max_depth}",
            f"nodes: {sum(len(t.nodes) for t in model.trees)}",
        ]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path):
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise ValueError(f"{path}: truncated model file")
    magic, version, kind, dim, genres = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    if genres != N_GENRES:
        raise ValueError(f"{path}: expected {N_GENRES} genres, got {genres}")
    buf = memoryview(data)
    offset = _HEADER.size
    if kind == KIND_NB:
        (alpha,) = struct.unpack_from("<d", buf, offset)
        offset += 8
        prior, offset = _read_floats(buf, offset, N_GENRES)
        log_prob, offset = _read_floats(buf, offset, N_GENRES * dim)
        return NaiveBayesModel(
            class_log_prior=prior,
            feature_log_prob=log_prob.reshape(N_GENRES, dim),
            alpha=alpha,
        )
    if kind in (KIND_LOGREG, KIND_SVM):
        weights, offset = _read_floats(buf, offset, N_GENRES * dim)
        bias, offset = _read_floats(buf, offset, N_GENRES)
        return LinearModel(
            weights=weights.reshape(N_GENRES, dim),
            bias=bias,
            kind=SOFTMAX_REGRESSION if kind == KIND_LOGREG else OVR_HINGE,
        )
    if kind == KIND_MLP:
        embedding_dim, n_hidden = struct.unpack_from("<QQ", buf, offset)
        offset += 16
        sizes = struct.unpack_from(f"<{n_hidden}Q", buf, offset)
        offset += 8 * n_hidden
        embedding, offset = _read_floats(buf, offset, dim * embedding_dim)
        hidden_weights = []
        hidden_biases = []
        fan_in = embedding_dim
        for size in sizes:
            W, offset = _read_floats(buf, offset, fan_in * size)
            hidden_weights.append(W.reshape(fan_in, size))
            b, offset = _read_floats(buf, offset, size)
            hidden_biases.append(b)
            fan_in = size
        out_w, offset = _read_floats(buf, offset, fan_in * N_GENRES)
        out_b, offset = _read_floats(buf, offset, N_GENRES)
        return MlpModel(
            embedding=embedding.reshape(dim, embedding_dim),
            hidden_weights=hidden_weights,
            hidden_biases=hidden_biases,
            output_weights=out_w.reshape(fan_in, N_GENRES),
            output_bias=out_b,
        )
    if kind == KIND_FOREST:
        n_trees, max_depth = struct.unpack_from("<QQ", buf, offset)
        offset += 16
        trees = []
        for _ in range(n_trees):
            (n_nodes,) = struct.unpack_from("<Q", buf, offset)
            offset += 8
            nodes = []
            for _ in range(n_nodes):
                feature, threshold, left, right = struct.unpack_from(
                    "<qdqq", buf, offset
                )
                offset += 32
                hist, offset = _read_floats(buf, offset, N_GENRES)
                nodes.append(
                    TreeNode(
                        feature=feature,
                        threshold=threshold,
                        left=left,
                        right=right,
                        histogram=hist if feature < 0 else None,
                    )
                )
            trees.append(DecisionTree(nodes=nodes))
        return ForestModel(
            trees=trees, n_features=dim, max_depth=max_depth
        )
    raise ValueError(f"{path}: unknown model kind {kind}")

"""Classifier inputs: tokenization, vocabulary, count vectors, sequences.

The four feature compositions (title, title+NER, title+extended NER,
directions) are rendered to plain text here, then turned into either sparse
count vectors for the classical models or fixed-length id sequences for the
neural model.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import RecipeRecord
from .extraction import DEGREE_ESCAPE, DEGREE_MARK

PAD_ID = 0
UNK_ID = 1
CLS_ID = 2
SEP_ID = 3
SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[SEP]")

DEFAULT_MAX_SIZE = 50_000
DEFAULT_MIN_DF = 1


class FeatureSpec(enum.Enum):
    TITLE = "title"
    TITLE_NER = "title-ner"
    TITLE_EXTNER = "title-extner"
    DIRECTIONS = "directions"

    @classmethod
    def parse(cls, text: str) -> "FeatureSpec":
        key = text.strip().lower().replace("_", "-")
        for spec in cls:
            if spec.value == key:
                return spec
        raise ValueError(
            f"unknown feature spec {text!r}; "
            f"expected one of {[s.value for s in cls]}"
        )


# Sequence lengths: 256 covers the title-based compositions, directions
# run longer and get 512.
MAX_LEN = {
    FeatureSpec.TITLE: 256,
    FeatureSpec.TITLE_NER: 256,
    FeatureSpec.TITLE_EXTNER: 256,
    FeatureSpec.DIRECTIONS: 512,
}


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything but letters, digits, or the degree
    mark; the degree mark becomes its own token."""
    text = text.replace(DEGREE_ESCAPE, DEGREE_MARK).lower()
    tokens: list[str] = []
    buf: list[str] = []
    for ch in text:
        if ch.isalnum():
            buf.append(ch)
            continue
        if buf:
            tokens.append("".join(buf))
            buf.clear()
        if ch == DEGREE_MARK:
            tokens.append(DEGREE_MARK)
    if buf:
        tokens.append("".join(buf))
    return tokens


def compose_feature_text(record: RecipeRecord, spec: FeatureSpec) -> str:
    """Render the record fields a feature spec asks for into one string."""
    if spec is FeatureSpec.TITLE:
        return record.title
    if spec is FeatureSpec.TITLE_NER:
        joined = " ".join(record.ner)
        return f"{record.title} {joined}" if joined else record.title
    if spec is FeatureSpec.TITLE_EXTNER:
        if record.extended_ner is None:
            raise ValueError(
                f"record {record.record_id} has no extended entities; "
                "run extend_corpus first"
            )
        joined = " ".join(record.extended_ner.surfaces())
        return f"{record.title} {joined}" if joined else record.title
    if spec is FeatureSpec.DIRECTIONS:
        return " ".join(record.directions)
    raise ValueError(f"unknown feature spec: {spec!r}")


@dataclass
class Vocabulary:
    """Frozen term table; indices 0-3 are the special tokens."""

    index_to_term: list[str]
    term_to_index: dict[str, int]

    @property
    def size(self) -> int:
        return len(self.index_to_term)

    @property
    def n_terms(self) -> int:
        return self.size - len(SPECIAL_TOKENS)

    def index_of(self, term: str) -> int:
        """Sequence-mode lookup: unknown terms map to [UNK]."""
        return self.term_to_index.get(term, UNK_ID)

    def term_of(self, index: int) -> str:
        return self.index_to_term[index]

    def __contains__(self, term: str) -> bool:
        return term in self.term_to_index

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            for term in self.index_to_term:
                handle.write(term + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if tuple(lines[: len(SPECIAL_TOKENS)]) != SPECIAL_TOKENS:
            raise ValueError(
                f"{path}: vocabulary file must start with "
                f"{', '.join(SPECIAL_TOKENS)}"
            )
        return cls(
            index_to_term=lines,
            term_to_index={term: i for i, term in enumerate(lines)},
        )


def build_vocabulary(
    records: Iterable[RecipeRecord],
    spec: FeatureSpec,
    max_size: int = DEFAULT_MAX_SIZE,
    min_df: int = DEFAULT_MIN_DF,
) -> Vocabulary:
    """Rank terms by document frequency (ties lexicographic) and keep the
    top max_size - 4; order-independent over the record list."""
    if max_size <= len(SPECIAL_TOKENS):
        raise ValueError(f"max_size must exceed {len(SPECIAL_TOKENS)}")
    if min_df < 1:
        raise ValueError("min_df must be at least 1")
    doc_freq: dict[str, int] = {}
    for record in records:
        for term in set(tokenize(compose_feature_text(record, spec))):
            doc_freq[term] = doc_freq.get(term, 0) + 1
    ranked = sorted(
        (term for term, df in doc_freq.items() if df >= min_df),
        key=lambda term: (-doc_freq[term], term),
    )
    kept = ranked[: max_size - len(SPECIAL_TOKENS)]
    index_to_term = list(SPECIAL_TOKENS) + kept
    return Vocabulary(
        index_to_term=index_to_term,
        term_to_index={term: i for i, term in enumerate(index_to_term)},
    )


@dataclass(frozen=True)
class CountVector:
    """Sparse token counts: strictly increasing vocab indices, counts >= 1."""

    indices: tuple[int, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.counts):
            raise ValueError("indices and counts must align")
        if any(c < 1 for c in self.counts):
            raise ValueError("counts must be at least 1")
        if any(
            b <= a for a, b in zip(self.indices, self.indices[1:])
        ):
            raise ValueError("indices must be strictly increasing")

    def total(self) -> int:
        return sum(self.counts)


def vectorize(text: str, vocab: Vocabulary) -> CountVector:
    """Count in-vocabulary tokens; out-of-vocabulary tokens are skipped and
    special tokens never appear."""
    counts: dict[int, int] = {}
    for token in tokenize(text):
        index = vocab.term_to_index.get(token)
        if index is None:
            continue
        counts[index] = counts.get(index, 0) + 1
    indices = tuple(sorted(counts))
    return CountVector(
        indices=indices, counts=tuple(counts[i] for i in indices)
    )


def to_dense(vector: CountVector, vocab: Vocabulary) -> np.ndarray:
    """Dense term-feature view (specials dropped): feature j = vocab index
    j + 4."""
    dense = np.zeros(vocab.n_terms, dtype=np.float64)
    for index, count in zip(vector.indices, vector.counts):
        if index >= len(SPECIAL_TOKENS):
            dense[index - len(SPECIAL_TOKENS)] = count
    return dense


def design_matrix(
    records: Sequence[RecipeRecord], spec: FeatureSpec, vocab: Vocabulary
) -> np.ndarray:
    """Stack count-vector features for a record list: shape (n, n_terms)."""
    X = np.zeros((len(records), vocab.n_terms), dtype=np.float64)
    for row, record in enumerate(records):
        vector = vectorize(compose_feature_text(record, spec), vocab)
        X[row] = to_dense(vector, vocab)
    return X


def encode_sequence(
    text: str, vocab: Vocabulary, max_len: int
) -> np.ndarray:
    """Fixed-length id sequence: [CLS], content (OOV -> [UNK]) truncated to
    max_len - 2, [SEP], then [PAD] to exactly max_len."""
    if max_len < 3:
        raise ValueError("max_len must be at least 3")
    ids = [vocab.index_of(token) for token in tokenize(text)][: max_len - 2]
    seq = np.full(max_len, PAD_ID, dtype=np.int64)
    seq[0] = CLS_ID
    seq[1 : 1 + len(ids)] = ids
    seq[1 + len(ids)] = SEP_ID
    return seq


def sequence_matrix(
    records: Sequence[RecipeRecord],
    spec: FeatureSpec,
    vocab: Vocabulary,
    max_len: int | None = None,
) -> np.ndarray:
    length = MAX_LEN[spec] if max_len is None else max_len
    return np.stack(
        [
            encode_sequence(compose_feature_text(record, spec), vocab, length)
            for record in records
        ]
    )

"""Query-by-committee annotation loop and inter-annotator agreement.

A committee of classifiers trained on the labeled records ranks the
unlabeled pool by vote entropy, routes the most contentious records to a
human, and auto-labels records on which it is unanimous and confident.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import (
    Genre,
    RecipeRecord,
    record_from_dict,
    record_to_dict,
    relabel,
)
from .features import FeatureSpec, Vocabulary, build_vocabulary, design_matrix
from .models import (
    N_GENRES,
    TrainConfig,
    emits_calibrated_probabilities,
    predict_genres,
    predict_proba,
    train_logreg,
    train_nb,
    train_svm,
)

DEFAULT_MEMBER_KINDS = ("nb", "logreg", "svm")


@dataclass(frozen=True)
class CommitteeConfig:
    member_kinds: tuple[str, ...] = DEFAULT_MEMBER_KINDS
    train_config: TrainConfig = TrainConfig()
    nb_alpha: float = 1.0

    def __post_init__(self) -> None:
        if len(self.member_kinds) < 2:
            raise ValueError("a committee needs at least 2 members")


@dataclass
class Committee:
    members: list
    vocab: Vocabulary
    spec: FeatureSpec
    kinds: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.members)


_TRAINERS = {
    "nb": lambda X, y, cfg, alpha: train_nb(X, y, alpha=alpha),
    "logreg": lambda X, y, cfg, alpha: train_logreg(X, y, cfg),
    "svm": lambda X, y, cfg, alpha: train_svm(X, y, cfg),
}


def train_committee(
    records: Sequence[RecipeRecord],
    vocab: Vocabulary,
    spec: FeatureSpec,
    config: CommitteeConfig | None = None,
) -> Committee:
    config = config or CommitteeConfig()
    labeled = [r for r in records if r.genre is not None]
    if not labeled:
        raise ValueError("committee training needs labeled records")
    X = design_matrix(labeled, spec, vocab)
    y = np.array([int(r.genre) for r in labeled], dtype=np.int64)
    members = []
    for kind in config.member_kinds:
        trainer = _TRAINERS.get(kind)
        if trainer is None:
            raise ValueError(
                f"unknown committee member kind {kind!r}; "
                f"expected one of {sorted(_TRAINERS)}"
            )
        members.append(trainer(X, y, config.train_config, config.nb_alpha))
    return Committee(
        members=members, vocab=vocab, spec=spec, kinds=config.member_kinds
    )


def committee_probas(
    committee: Committee, records: Sequence[RecipeRecord]
) -> np.ndarray:
    """Per-member class probabilities, shape (members, records, 9)."""
    X = design_matrix(records, committee.spec, committee.vocab)
    return np.stack(
        [predict_proba(member, X) for member in committee.members]
    )


def committee_votes(probas: np.ndarray) -> np.ndarray:
    """Hard votes per member, shape (members, records)."""
    return np.stack([predict_genres(p) for p in probas])


def vote_entropy(votes: Sequence[int]) -> float:
    """Shannon entropy (nats) of the committee's hard-vote distribution."""
    votes = list(votes)
    if len(votes) < 2:
        raise ValueError(f"vote entropy needs at least 2 votes, got {len(votes)}")
    m = len(votes)
    counts: dict[int, int] = {}
    for vote in votes:
        counts[vote] = counts.get(vote, 0) + 1
    return 0.0 - sum(
        (c / m) * math.log(c / m) for c in counts.values() if c > 0
    )


def select_queries(
    committee: Committee, pool: Sequence[RecipeRecord], b: int
) -> list[int]:
    """Ids of the top-b pool records by vote entropy; ties by ascending id."""
    if not pool:
        return []
    probas = committee_probas(committee, pool)
    votes = committee_votes(probas)
    ranked = sorted(
        (
            (-vote_entropy(votes[:, i].tolist()), record.record_id)
            for i, record in enumerate(pool)
        )
    )
    return [record_id for _, record_id in ranked[: max(0, b)]]


def auto_label(
    committee: Committee, pool: Sequence[RecipeRecord], tau: float
) -> list[tuple[int, Genre, float]]:
    """Records every member argmaxes identically with mean confidence >= tau.

    The confidence mean runs over the probability-calibrated members; a
    margin-based member (the hinge SVM, whose softmax scores are
    calibration-free) takes part in the unanimity vote but would cap the
    mean well under any usable threshold, so it is excluded from it.
    """
    if not 0 < tau <= 1:
        raise ValueError(f"confidence threshold must lie in (0, 1], got {tau}")
    if not pool:
        return []
    probas = committee_probas(committee, pool)
    votes = committee_votes(probas)
    calibrated = [
        m for m, member in enumerate(committee.members)
        if emits_calibrated_probabilities(member)
    ]
    if not calibrated:
        calibrated = list(range(len(committee.members)))
    out: list[tuple[int, Genre, float]] = []
    for i, record in enumerate(pool):
        first = votes[0, i]
        if not np.all(votes[:, i] == first):
            continue
        mean_conf = float(probas[calibrated, i, first - 1].mean())
        if mean_conf >= tau:
            out.append((record.record_id, Genre(first), mean_conf))
    return out


@dataclass
class AnnotationSession:
    records: dict[int, RecipeRecord]
    pool_ids: list[int]
    queried: list[int]
    batch_size: int
    tau: float
    seed: int
    spec: FeatureSpec
    committee_config: CommitteeConfig
    vocab: Vocabulary
    round: int = 0
    committee: Committee | None = None

    @property
    def labeled_ids(self) -> list[int]:
        return sorted(
            i for i, r in self.records.items() if r.genre is not None
        )

    def labeled_counts(self) -> dict[str, int]:
        counts = {"human": 0, "machine": 0}
        for record in self.records.values():
            if record.genre is not None:
                counts[record.provenance] += 1
        return counts

    def pool_records(self) -> list[RecipeRecord]:
        return [self.records[i] for i in self.pool_ids]


@dataclass
class RoundSummary:
    round: int
    auto_labeled: list[tuple[int, Genre, float]]
    queried: list[int]
    pool_remaining: int


def create_session(
    records: Sequence[RecipeRecord],
    spec: FeatureSpec = FeatureSpec.TITLE,
    batch_size: int = 9,
    tau: float = 0.99,
    seed: int = 0,
    committee_config: CommitteeConfig | None = None,
    vocab: Vocabulary | None = None,
) -> AnnotationSession:
    """Start a session: labeled records seed the committee, the rest pool.

    The vocabulary is frozen here over every record's text (labels are not
    consulted), keeping feature dimensions stable across rounds.
    """
    if not 0 < tau <= 1:
        raise ValueError(f"confidence threshold must lie in (0, 1], got {tau}")
    if batch_size < 1:
        raise ValueError("query batch size must be at least 1")
    by_id = {r.record_id: r for r in records}
    if len(by_id) != len(records):
        raise ValueError("duplicate record ids in session corpus")
    pool_ids = sorted(i for i, r in by_id.items() if r.genre is None)
    if vocab is None:
        vocab = build_vocabulary(records, spec)
    return AnnotationSession(
        records=by_id,
        pool_ids=pool_ids,
        queried=[],
        batch_size=batch_size,
        tau=tau,
        seed=seed,
        spec=spec,
        committee_config=committee_config or CommitteeConfig(),
        vocab=vocab,
    )


def run_annotation_round(
    session: AnnotationSession, human_labels: dict[int, int] | None = None
) -> RoundSummary:
    """One loop iteration: ingest human labels for previously queried
    records, retrain the committee on all labeled data, auto-label the
    confident survivors, and emit the next query batch."""
    human_labels = human_labels or {}
    queried = set(session.queried)
    for record_id, label in human_labels.items():
        if record_id not in queried:
            raise ValueError(
                f"label for record {record_id} rejected: not in the "
                f"queried batch {sorted(queried)}"
            )
        if not 1 <= int(label) <= N_GENRES:
            raise ValueError(
                f"label {label} for record {record_id} outside 1..{N_GENRES}"
            )
    for record_id, label in sorted(human_labels.items()):
        session.records[record_id] = relabel(
            session.records[record_id], Genre(int(label)), "human"
        )
        session.pool_ids.remove(record_id)
    session.queried = []

    labeled = [
        session.records[i] for i in session.labeled_ids
    ]
    auto: list[tuple[int, Genre, float]] = []
    if labeled and session.pool_ids:
        session.committee = train_committee(
            labeled, session.vocab, session.spec, session.committee_config
        )
        auto = auto_label(
            session.committee, session.pool_records(), session.tau
        )
        for record_id, genre, _ in auto:
            session.records[record_id] = relabel(
                session.records[record_id], genre, "machine"
            )
            session.pool_ids.remove(record_id)
        session.queried = select_queries(
            session.committee, session.pool_records(), session.batch_size
        )
    elif labeled:
        session.committee = train_committee(
            labeled, session.vocab, session.spec, session.committee_config
        )
    session.round += 1
    return RoundSummary(
        round=session.round,
        auto_labeled=auto,
        queried=list(session.queried),
        pool_remaining=len(session.pool_ids),
    )


def committee_agreement(session: AnnotationSession) -> float:
    """Fraction of the remaining pool on which the committee is unanimous;
    1.0 when the pool is empty or no committee is trained yet."""
    if session.committee is None or not session.pool_ids:
        return 1.0
    probas = committee_probas(session.committee, session.pool_records())
    votes = committee_votes(probas)
    unanimous = np.all(votes == votes[0], axis=0)
    return float(unanimous.mean())


SESSION_FILE_VERSION = 1


def save_session(session: AnnotationSession, path: str | Path) -> None:
    """Checkpoint: one JSON header line, then the canonical record lines."""
    header = {
        "version": SESSION_FILE_VERSION,
        "round": session.round,
        "tau": session.tau,
        "batch_size": session.batch_size,
        "seed": session.seed,
        "spec": session.spec.value,
        "queried": list(session.queried),
        "member_kinds": list(session.committee_config.member_kinds),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(header, ensure_ascii=False) + "\n")
        for record_id in sorted(session.records):
            handle.write(
                json.dumps(
                    record_to_dict(session.records[record_id]),
                    ensure_ascii=False,
                )
                + "\n"
            )


def load_session(
    path: str | Path, committee_config: CommitteeConfig | None = None
) -> AnnotationSession:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty session file")
    header = json.loads(lines[0])
    if header.get("version") != SESSION_FILE_VERSION:
        raise ValueError(f"{path}: unsupported session version")
    records = [record_from_dict(json.loads(line)) for line in lines[1:] if line]
    config = committee_config or CommitteeConfig(
        member_kinds=tuple(header["member_kinds"])
    )
    session = create_session(
        records,
        spec=FeatureSpec.parse(header["spec"]),
        batch_size=header["batch_size"],
        tau=header["tau"],
        seed=header["seed"],
        committee_config=config,
    )
    session.round = header["round"]
    session.queried = [int(i) for i in header["queried"]]
    return session


def validate_kappa_table(table: np.ndarray) -> int:
    """Check the N x 9 rating-count matrix; returns raters per item."""
    table = np.asarray(table)
    if table.ndim != 2 or table.shape[1] != N_GENRES:
        raise ValueError(f"kappa table must be N x {N_GENRES}")
    if table.shape[0] < 2:
        raise ValueError("kappa table needs at least 2 items")
    if np.any(table < 0):
        raise ValueError("kappa table entries must be non-negative")
    row_sums = table.sum(axis=1)
    n = int(row_sums[0])
    if not np.all(row_sums == n):
        raise ValueError("every item needs the same number of ratings")
    if n < 2:
        raise ValueError("kappa needs at least 2 raters per item")
    return n


def fleiss_kappa(table: np.ndarray) -> float | None:
    """Chance-corrected multi-rater agreement.

    Returns None for the degenerate table where every rater always picks
    one category (expected agreement 1, kappa undefined).
    """
    table = np.asarray(table, dtype=np.float64)
    n = validate_kappa_table(table)
    N = table.shape[0]
    p_cat = table.sum(axis=0) / (N * n)
    p_item = (np.square(table).sum(axis=1) - n) / (n * (n - 1))
    p_mean = float(p_item.mean())
    p_expected = float(np.square(p_cat).sum())
    if abs(1.0 - p_expected) < 1e-15:
        return None
    return (p_mean - p_expected) / (1.0 - p_expected)


def kappa_table_from_csv(path: str | Path) -> np.ndarray:
    """Build the rating-count matrix from item_id,rater_id,label rows."""
    ratings: dict[str, list[int]] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"item_id", "rater_id", "label"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(
                f"{path}: expected header with columns {sorted(required)}"
            )
        for row in reader:
            label = int(row["label"])
            if not 1 <= label <= N_GENRES:
                raise ValueError(
                    f"{path}: label {label} outside 1..{N_GENRES} "
                    f"for item {row['item_id']}"
                )
            ratings.setdefault(row["item_id"], []).append(label)
    table = np.zeros((len(ratings), N_GENRES), dtype=np.int64)
    for i, item in enumerate(sorted(ratings)):
        for label in ratings[item]:
            table[i, label - 1] += 1
    validate_kappa_table(table)
    return table

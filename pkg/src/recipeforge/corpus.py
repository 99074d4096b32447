"""Recipe corpus ingestion, validation, persistence, splitting, resampling.

Two on-disk formats are supported: the CSV interchange format whose
list-valued cells hold bracketed, double-quoted string arrays, and the
canonical record file (one JSON object per line) used internally because it
avoids quote-escaping ambiguity.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from enum import IntEnum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .extraction import Entity, EntitySet, normalize_entity

PROVENANCES = ("human", "machine", "unlabeled")


class Genre(IntEnum):
    BAKERY = 1
    DRINKS = 2
    NONVEG = 3
    VEGETABLES = 4
    FASTFOOD = 5
    CEREAL = 6
    MEAL = 7
    SIDES = 8
    FUSION = 9


GENRE_NAMES = {
    Genre.BAKERY: "Bakery",
    Genre.DRINKS: "Drinks",
    Genre.NONVEG: "NonVeg",
    Genre.VEGETABLES: "Vegetables",
    Genre.FASTFOOD: "FastFood",
    Genre.CEREAL: "Cereal",
    Genre.MEAL: "Meal",
    Genre.SIDES: "Sides",
    Genre.FUSION: "Fusion",
}

_GENRE_BY_KEY = {name.lower(): genre for genre, name in GENRE_NAMES.items()}


class CorpusFormatError(ValueError):
    """Structural problem with a corpus file (header, columns, field types)."""


class CellParseError(ValueError):
    """Malformed list-valued cell; carries the byte offset within the cell."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class RecordValidationError(ValueError):
    """A record violates corpus invariants."""


def parse_genre(text: str) -> Genre:
    """Map a genre name to its label; case- and spacing-insensitive."""
    key = text.strip().lower().replace(" ", "").replace("_", "")
    genre = _GENRE_BY_KEY.get(key)
    if genre is None:
        raise RecordValidationError(f"unknown genre name: {text!r}")
    return genre


@dataclass
class RecipeRecord:
    record_id: int
    title: str
    directions: list[str]
    ner: list[str] = field(default_factory=list)
    extended_ner: EntitySet | None = None
    genre: Genre | None = None
    provenance: str = "unlabeled"

    def validate(self) -> None:
        if not self.title.strip():
            raise RecordValidationError(
                f"record {self.record_id}: title is empty"
            )
        if not self.directions:
            raise RecordValidationError(
                f"record {self.record_id}: needs at least one direction step"
            )
        if self.provenance not in PROVENANCES:
            raise RecordValidationError(
                f"record {self.record_id}: bad provenance {self.provenance!r}"
            )
        if self.genre is not None and self.provenance == "unlabeled":
            raise RecordValidationError(
                f"record {self.record_id}: labeled record needs human or "
                "machine provenance"
            )
        if self.genre is None and self.provenance != "unlabeled":
            raise RecordValidationError(
                f"record {self.record_id}: {self.provenance} provenance "
                "without a genre"
            )
        if self.extended_ner is not None:
            missing = sorted(
                key
                for key in (
                    normalize_entity(term).lower() for term in self.ner
                )
                if key and key not in self.extended_ner.keys()
            )
            if missing:
                raise RecordValidationError(
                    f"record {self.record_id}: extended entities drop source "
                    f"terms {missing}"
                )

    @property
    def label(self) -> int | None:
        return int(self.genre) if self.genre is not None else None


def encode_list_cell(items: Sequence[str]) -> str:
    """Render a string list as a bracketed, double-quoted array."""
    quoted = []
    for item in items:
        escaped = item.replace("\\", "\\\\").replace('"', '\\"')
        quoted.append(f'"{escaped}"')
    return "[" + ", ".join(quoted) + "]"


def decode_list_cell(cell: str) -> list[str]:
    """Parse a bracketed, quoted, comma-separated string array.

    A backslash escapes the quote and the backslash itself; any other
    backslash pair (the corpus's literal "\\u00b0" sequences) passes through
    untouched.  Raises CellParseError with the byte offset of the problem.
    """
    text = cell.strip()
    if not text:
        return []
    if not text.startswith("["):
        raise CellParseError("expected '[' to open list cell", 0)
    if not text.endswith("]"):
        raise CellParseError("expected ']' to close list cell", len(text) - 1)
    items: list[str] = []
    i = 1
    end = len(text) - 1
    while i < end:
        ch = text[i]
        if ch.isspace() or ch == ",":
            i += 1
            continue
        if ch not in ("'", '"'):
            raise CellParseError(f"expected quote, found {ch!r}", i)
        quote = ch
        opened_at = i
        i += 1
        chunk: list[str] = []
        while i < end:
            ch = text[i]
            if ch == "\\" and i + 1 < end and text[i + 1] in ('"', "'", "\\"):
                chunk.append(text[i + 1])
                i += 2
                continue
            if ch == quote:
                break
            chunk.append(ch)
            i += 1
        else:
            raise CellParseError("unbalanced quote in list cell", opened_at)
        items.append("".join(chunk))
        i += 1
    return items


CSV_COLUMNS = ("title", "directions", "NER", "genre", "label")
CSV_COLUMNS_EXTENDED = ("title", "directions", "NER", "extended_NER",
                        "genre", "label")


def _csv_header(fmt: str) -> tuple[str, ...]:
    if fmt == "with_extended":
        return CSV_COLUMNS_EXTENDED
    if fmt == "without_extended":
        return CSV_COLUMNS
    raise CorpusFormatError(f"unknown CSV format: {fmt!r}")


def ingest_csv(path: str | Path, fmt: str = "without_extended") -> list[RecipeRecord]:
    """Read a corpus CSV into records; ids assigned in file order from 0.

    Labeled rows carry human provenance (the interchange files hold curated
    labels); rows with an empty genre cell come in unlabeled.
    """
    expected = _csv_header(fmt)
    records: list[RecipeRecord] = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CorpusFormatError(f"{path}: empty file, no header") from None
        for column in expected:
            if column not in header:
                raise CorpusFormatError(
                    f"{path}: missing required column {column!r}"
                )
        index = {name: header.index(name) for name in expected}
        for row_number, row in enumerate(reader, start=1):
            if not any(cell.strip() for cell in row):
                continue
            try:
                title = row[index["title"]].strip()
                directions = decode_list_cell(row[index["directions"]])
                ner = decode_list_cell(row[index["NER"]])
                genre_cell = row[index["genre"]].strip()
                extended = None
                if fmt == "with_extended":
                    surfaces = decode_list_cell(row[index["extended_NER"]])
                    extended = EntitySet(
                        entity
                        for entity in (
                            _entity_from_surface(surface)
                            for surface in surfaces
                        )
                        if entity is not None
                    )
            except CellParseError as exc:
                raise CellParseError(
                    f"{path} row {row_number}: {exc}", exc.offset
                ) from exc
            except IndexError:
                raise CorpusFormatError(
                    f"{path} row {row_number}: too few cells"
                ) from None
            genre = None
            provenance = "unlabeled"
            if genre_cell:
                try:
                    genre = parse_genre(genre_cell)
                except RecordValidationError as exc:
                    raise RecordValidationError(
                        f"{path} row {row_number}: {exc}"
                    ) from None
                provenance = "human"
            record = RecipeRecord(
                record_id=row_number - 1,
                title=title,
                directions=directions,
                ner=ner,
                extended_ner=extended,
                genre=genre,
                provenance=provenance,
            )
            try:
                record.validate()
            except RecordValidationError as exc:
                raise RecordValidationError(
                    f"{path} row {row_number}: {exc}"
                ) from None
            records.append(record)
    return records


def _entity_from_surface(surface: str) -> Entity | None:
    normalized = normalize_entity(surface)
    if not normalized:
        return None
    return Entity(surface=surface, normalized=normalized, category="other")


def write_csv(records: Iterable[RecipeRecord], path: str | Path,
              fmt: str = "without_extended") -> None:
    header = _csv_header(fmt)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for record in records:
            row = {
                "title": record.title,
                "directions": encode_list_cell(record.directions),
                "NER": encode_list_cell(record.ner),
                "genre": (
                    GENRE_NAMES[record.genre].lower()
                    if record.genre is not None else ""
                ),
                "label": str(record.label) if record.label is not None else "",
            }
            if fmt == "with_extended":
                surfaces = (
                    record.extended_ner.surfaces()
                    if record.extended_ner is not None else []
                )
                row["extended_NER"] = encode_list_cell(surfaces)
            writer.writerow([row[name] for name in header])


def record_to_dict(record: RecipeRecord) -> dict:
    payload = {
        "id": record.record_id,
        "title": record.title,
        "directions": list(record.directions),
        "ner": list(record.ner),
    }
    if record.extended_ner is not None:
        payload["extended_ner"] = record.extended_ner.surfaces()
    payload["genre"] = (
        GENRE_NAMES[record.genre].lower() if record.genre is not None else None
    )
    payload["label"] = record.label
    payload["provenance"] = record.provenance
    return payload


def record_from_dict(payload: dict) -> RecipeRecord:
    extended = None
    if "extended_ner" in payload:
        extended = EntitySet(
            entity
            for entity in (
                _entity_from_surface(surface)
                for surface in payload["extended_ner"]
            )
            if entity is not None
        )
    genre = parse_genre(payload["genre"]) if payload.get("genre") else None
    record = RecipeRecord(
        record_id=int(payload["id"]),
        title=payload["title"],
        directions=list(payload["directions"]),
        ner=list(payload.get("ner", [])),
        extended_ner=extended,
        genre=genre,
        provenance=payload.get("provenance", "unlabeled"),
    )
    if genre is not None and payload.get("label") not in (None, int(genre)):
        raise RecordValidationError(
            f"record {record.record_id}: label {payload['label']} disagrees "
            f"with genre {payload['genre']!r}"
        )
    return record


def write_records(records: Iterable[RecipeRecord], path: str | Path) -> None:
    """Write the canonical record file: one JSON object per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record_to_dict(record), ensure_ascii=False))
            handle.write("\n")


def read_records(path: str | Path, validate: bool = True) -> list[RecipeRecord]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = record_from_dict(json.loads(line))
            except (json.JSONDecodeError, KeyError) as exc:
                raise CorpusFormatError(
                    f"{path} line {line_number}: {exc}"
                ) from exc
            if validate:
                record.validate()
            records.append(record)
    return records


@dataclass
class CorpusStats:
    per_genre: dict[Genre, dict[str, int]]
    unlabeled: int

    @property
    def labeled_total(self) -> int:
        return sum(sum(counts.values()) for counts in self.per_genre.values())

    @property
    def total(self) -> int:
        return self.labeled_total + self.unlabeled

    def genre_total(self, genre: Genre) -> int:
        return sum(self.per_genre[genre].values())

    def provenance_total(self, provenance: str) -> int:
        return sum(counts[provenance] for counts in self.per_genre.values())

    def to_dict(self) -> dict:
        return {
            "per_genre": {
                GENRE_NAMES[genre]: dict(counts)
                for genre, counts in self.per_genre.items()
            },
            "unlabeled": self.unlabeled,
            "labeled_total": self.labeled_total,
            "total": self.total,
        }


def corpus_stats(records: Iterable[RecipeRecord]) -> CorpusStats:
    per_genre = {genre: {"human": 0, "machine": 0} for genre in Genre}
    unlabeled = 0
    for record in records:
        if record.genre is None:
            unlabeled += 1
        else:
            per_genre[record.genre][record.provenance] += 1
    return CorpusStats(per_genre=per_genre, unlabeled=unlabeled)


@dataclass
class DatasetSplit:
    train_ids: list[int]
    val_ids: list[int]
    test_ids: list[int]

    def to_dict(self) -> dict:
        return {
            "train_ids": list(self.train_ids),
            "val_ids": list(self.val_ids),
            "test_ids": list(self.test_ids),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "DatasetSplit":
        return cls(
            train_ids=list(payload["train_ids"]),
            val_ids=list(payload["val_ids"]),
            test_ids=list(payload["test_ids"]),
        )


def split_stratified(
    records: Sequence[RecipeRecord],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> DatasetSplit:
    """Per-genre seeded shuffle into train/val/test.

    Train takes floor(train_ratio * n) per genre; the remainder is split
    between val and test in proportion, val receiving the extra record when
    the equal-ratio remainder is odd.
    """
    r_train, r_val, r_test = ratios
    if min(ratios) <= 0:
        raise ValueError(f"ratios must be positive, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got {ratios}")
    unlabeled = [r.record_id for r in records if r.genre is None]
    if unlabeled:
        raise RecordValidationError(
            f"cannot split unlabeled records: ids {unlabeled}"
        )
    by_genre: dict[Genre, list[int]] = {}
    for record in records:
        by_genre.setdefault(record.genre, []).append(record.record_id)
    for genre in sorted(by_genre):
        if len(by_genre[genre]) < 3:
            raise ValueError(
                f"genre {GENRE_NAMES[genre]} has only {len(by_genre[genre])} "
                "records; need at least 3 to populate three splits"
            )
    rng = np.random.default_rng(seed)
    train: list[int] = []
    val: list[int] = []
    test: list[int] = []
    for genre in sorted(by_genre):
        ids = np.array(sorted(by_genre[genre]), dtype=np.int64)
        ids = ids[rng.permutation(len(ids))]
        n = len(ids)
        n_train = math.floor(r_train * n)
        remainder = n - n_train
        n_test = math.floor(remainder * r_test / (r_val + r_test))
        n_val = remainder - n_test
        train.extend(int(i) for i in ids[:n_train])
        val.extend(int(i) for i in ids[n_train : n_train + n_val])
        test.extend(int(i) for i in ids[n_train + n_val :])
    return DatasetSplit(
        train_ids=sorted(train), val_ids=sorted(val), test_ids=sorted(test)
    )


def equalize(
    records: Sequence[RecipeRecord], per_genre: int, seed: int = 0
) -> list[RecipeRecord]:
    """Sample exactly per_genre records from every genre, without replacement."""
    by_genre: dict[Genre, list[RecipeRecord]] = {}
    for record in records:
        if record.genre is not None:
            by_genre.setdefault(record.genre, []).append(record)
    for genre in Genre:
        count = len(by_genre.get(genre, []))
        if count < per_genre:
            raise ValueError(
                f"genre {GENRE_NAMES[genre]} has {count} records, "
                f"need {per_genre}"
            )
    rng = np.random.default_rng(seed)
    chosen: list[RecipeRecord] = []
    for genre in Genre:
        pool = sorted(by_genre[genre], key=lambda r: r.record_id)
        picks = rng.choice(len(pool), size=per_genre, replace=False)
        chosen.extend(pool[int(i)] for i in sorted(picks))
    return chosen


def labeled_records(records: Iterable[RecipeRecord]) -> list[RecipeRecord]:
    return [r for r in records if r.genre is not None]


def records_by_id(records: Iterable[RecipeRecord]) -> dict[int, RecipeRecord]:
    return {r.record_id: r for r in records}


def select_records(
    records: Sequence[RecipeRecord], ids: Iterable[int]
) -> list[RecipeRecord]:
    index = records_by_id(records)
    return [index[i] for i in ids]


def relabel(
    record: RecipeRecord, genre: Genre, provenance: str
) -> RecipeRecord:
    if provenance not in ("human", "machine"):
        raise ValueError(f"labels need human or machine provenance, got "
                         f"{provenance!r}")
    return replace(record, genre=genre, provenance=provenance)

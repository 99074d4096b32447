"""Entity extraction from cooking directions.

Two independent extractors run over a recipe's directions: a token-level
pattern grammar (temperatures, durations, pan sizes, equipment/brand names,
process verbs) and a gazetteer scanner driven by the corpus's own ingredient
lists.  Their output is merged with the source ingredient entities into a
single duplicate-free set keyed by normalized text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Iterator

if TYPE_CHECKING:
    from .corpus import RecipeRecord

DEGREE_MARK = "°"
# The source corpus stores the degree sign as the six-character escape
# sequence rather than the actual character; both must key identically.
DEGREE_ESCAPE = "\\u00b0"

CATEGORIES = (
    "ingredient",
    "process",
    "temperature",
    "duration",
    "quantity",
    "equipment",
    "other",
)

DEFAULT_PROCESS_VERBS = (
    "Bake",
    "Mix",
    "Stir",
    "Melt",
    "Dissolve",
    "Freeze",
    "Pour",
    "Cut",
    "Cook",
    "Add",
    "Spray",
    "Preheat",
    "Refrigerate",
    "Boil",
    "Beat",
    "Heat",
    "Press",
    "Fill",
)

DURATION_UNITS = frozenset(
    {"second", "seconds", "minute", "minutes", "hour", "hours"}
)

_WS_RE = re.compile(r"\s+")
_NUMBER_RE = re.compile(r"^\d+$")
_DEGREE_TOKEN_RE = re.compile(r"^(\d+)(?:°|\\u00b0)$")
_SIZE_RE = re.compile(r"^\d+x\d+$|^\d+-inch(?:es)?$", re.IGNORECASE)
_CAPITALIZED_RE = re.compile(r"^[A-Z][A-Za-z'\-]*$")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?\n]+")
# Punctuation stripped from token edges; degree marks and backslashes must
# survive so "450°" stays recognisable as a temperature.
_EDGE_PUNCT = ",;:()[]{}\"'`*"


def normalize_entity(surface: str) -> str:
    """Canonical key text for an entity surface.

    Hyphens and other punctuation are dropped (letters, digits, and spaces
    survive, so "9x13" is preserved), whitespace collapses to single spaces,
    and casing is kept in the output; callers compare on the lowercased
    result.  An all-punctuation surface normalizes to "" and is dropped by
    callers.
    """
    text = surface.replace(DEGREE_ESCAPE, DEGREE_MARK)
    kept = [ch if (ch.isalnum() or ch.isspace()) else "" for ch in text]
    return _WS_RE.sub(" ", "".join(kept)).strip()


@dataclass(frozen=True)
class Entity:
    surface: str
    normalized: str
    category: str

    @property
    def key(self) -> str:
        return self.normalized.lower()


def make_entity(surface: str, category: str) -> Entity | None:
    """Build an entity, or None when the surface normalizes to nothing."""
    if category not in CATEGORIES:
        raise ValueError(f"unknown entity category: {category!r}")
    normalized = normalize_entity(surface)
    if not normalized:
        return None
    return Entity(surface=surface, normalized=normalized, category=category)


class EntitySet:
    """Insertion-ordered entity collection, unique per normalized key.

    Keys are compared case-insensitively; on collision the first-inserted
    surface wins.
    """

    def __init__(self, entities: Iterable[Entity] = ()) -> None:
        self._by_key: dict[str, Entity] = {}
        for entity in entities:
            self.add(entity)

    def add(self, entity: Entity) -> bool:
        """Insert; returns False when the key is already present."""
        key = entity.key
        if key in self._by_key:
            return False
        self._by_key[key] = entity
        return True

    def __iter__(self) -> Iterator[Entity]:
        return iter(self._by_key.values())

    def __len__(self) -> int:
        return len(self._by_key)

    def __contains__(self, text: str) -> bool:
        return normalize_entity(text).lower() in self._by_key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntitySet):
            return NotImplemented
        return self.keys() == other.keys()

    def __repr__(self) -> str:
        return f"EntitySet({[e.surface for e in self]})"

    def get(self, text: str) -> Entity | None:
        return self._by_key.get(normalize_entity(text).lower())

    def keys(self) -> set[str]:
        return set(self._by_key)

    def surfaces(self) -> list[str]:
        return [e.surface for e in self]


class Gazetteer:
    """Ingredient lexicon harvested from the corpus's own NER lists.

    Maps lowercased normalized terms to the number of records whose source
    entity list contains them.
    """

    def __init__(self, terms: dict[str, int] | None = None) -> None:
        self.terms: dict[str, int] = dict(terms or {})
        self._max_words = max(
            (term.count(" ") + 1 for term in self.terms), default=0
        )

    def __len__(self) -> int:
        return len(self.terms)

    def __contains__(self, term: str) -> bool:
        return term in self.terms

    @property
    def max_words(self) -> int:
        return self._max_words


def build_gazetteer(records: Iterable["RecipeRecord"]) -> Gazetteer:
    """Count, per normalized source entity, the records listing it."""
    counts: dict[str, int] = {}
    for record in records:
        keys = {
            normalize_entity(term).lower()
            for term in record.ner
        }
        keys.discard("")
        for key in keys:
            counts[key] = counts.get(key, 0) + 1
    return Gazetteer(counts)


def load_verb_lexicon(path: str | Path) -> tuple[str, ...]:
    """Read a process-verb lexicon file: one verb per line, UTF-8."""
    verbs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        verb = line.strip()
        if verb:
            verbs.append(verb)
    return tuple(verbs)


def _sentence_tokens(sentence: str) -> list[str]:
    tokens = []
    for raw in sentence.split():
        token = raw.strip(_EDGE_PUNCT)
        if token:
            tokens.append(token)
    return tokens


def _is_process_verb(token: str, verbs: frozenset[str]) -> bool:
    return token.lower() in verbs


def extract_pattern(
    direction: str,
    verbs: Iterable[str] = DEFAULT_PROCESS_VERBS,
) -> EntitySet:
    """Run the token-level pattern grammar over direction text.

    Per sentence, the grammar emits:

    * temperature: a number carrying a degree mark (actual or the escaped
      corpus form) or followed by "degrees", absorbing an immediately
      preceding process verb ("bake 450\\u00b0", "350 degrees");
    * duration: number / "number to number" plus seconds|minutes|hours, or
      the literal "overnight", likewise absorbing an adjacent preceding
      verb ("Bake 40 minutes");
    * pan size: compact digit-x-digit or N-inch tokens ("9x13");
    * equipment/brand: a maximal run of capitalized tokens away from the
      sentence start ("Tupperware", "Cool Whip");
    * process: the sentence-initial capitalized verb from the lexicon, kept
      only when not absorbed above and the sentence also names equipment or
      a pan size -- a bare imperative with no apparatus in sight carries no
      reusable entity.
    """
    verb_set = frozenset(v.lower() for v in verbs)
    result = EntitySet()
    for sentence in _SENTENCE_SPLIT_RE.split(direction):
        tokens = _sentence_tokens(sentence)
        if not tokens:
            continue
        spans: list[tuple[int, int, str]] = []  # (start, end_excl, category)
        consumed = [False] * len(tokens)

        def absorb_verb(start: int) -> int:
            prev = start - 1
            if prev >= 0 and not consumed[prev] and _is_process_verb(
                tokens[prev], verb_set
            ):
                consumed[prev] = True
                return prev
            return start

        i = 0
        while i < len(tokens):
            token = tokens[i]
            nxt = tokens[i + 1] if i + 1 < len(tokens) else ""
            if _DEGREE_TOKEN_RE.match(token):
                start = absorb_verb(i)
                spans.append((start, i + 1, "temperature"))
                i += 1
                continue
            if _NUMBER_RE.match(token) and nxt.lower() in ("degrees", "degree"):
                start = absorb_verb(i)
                spans.append((start, i + 2, "temperature"))
                i += 2
                continue
            if token.lower() == "overnight":
                spans.append((i, i + 1, "duration"))
                i += 1
                continue
            if _NUMBER_RE.match(token):
                if nxt.lower() in DURATION_UNITS:
                    start = absorb_verb(i)
                    spans.append((start, i + 2, "duration"))
                    i += 2
                    continue
                if (
                    nxt.lower() == "to"
                    and i + 3 < len(tokens)
                    and _NUMBER_RE.match(tokens[i + 2])
                    and tokens[i + 3].lower() in DURATION_UNITS
                ):
                    start = absorb_verb(i)
                    spans.append((start, i + 4, "duration"))
                    i += 4
                    continue
            if _SIZE_RE.match(token):
                spans.append((i, i + 1, "quantity"))
                i += 1
                continue
            i += 1

        for start, end, _ in spans:
            for j in range(start, end):
                consumed[j] = True

        # Capitalized runs away from the sentence start become
        # equipment/brand entities.
        j = 1
        while j < len(tokens):
            if consumed[j] or not _CAPITALIZED_RE.match(tokens[j]):
                j += 1
                continue
            run_start = j
            while (
                j < len(tokens)
                and not consumed[j]
                and _CAPITALIZED_RE.match(tokens[j])
            ):
                j += 1
            spans.append((run_start, j, "equipment"))

        has_apparatus = any(
            cat in ("equipment", "quantity") for _, _, cat in spans
        )
        head = tokens[0]
        if (
            has_apparatus
            and not consumed[0]
            and _CAPITALIZED_RE.match(head)
            and _is_process_verb(head, verb_set)
        ):
            spans.append((0, 1, "process"))

        for start, end, category in sorted(spans):
            surface = " ".join(tokens[start:end])
            entity = make_entity(surface, category)
            if entity is not None:
                result.add(entity)
    return result


def extract_gazetteer(direction: str, gaz: Gazetteer) -> EntitySet:
    """Longest-match-first scan of the normalized token stream.

    Multi-word gazetteer keys win over their sub-words; each matched term
    is emitted once, as an ingredient.
    """
    result = EntitySet()
    if not gaz.terms:
        return result
    tokens = [normalize_entity(tok) for tok in direction.split()]
    tokens = [tok for tok in tokens if tok]
    lowered = [tok.lower() for tok in tokens]
    i = 0
    n = len(tokens)
    while i < n:
        matched = 0
        for width in range(min(gaz.max_words, n - i), 0, -1):
            candidate = " ".join(lowered[i : i + width])
            if candidate in gaz.terms:
                entity = make_entity(" ".join(tokens[i : i + width]), "ingredient")
                if entity is not None:
                    result.add(entity)
                matched = width
                break
        i += matched if matched else 1
    return result


def merge_entities(
    source_ner: Iterable[str], a: EntitySet, b: EntitySet
) -> EntitySet:
    """Union of the source entity list with two extracted sets.

    Keyed by lowercased normalized text; on collision the first-inserted
    surface wins (insertion order: source entries, then a, then b).  Source
    entries enter with their normalized text as surface, matching how the
    extended lists render them.
    """
    merged = EntitySet()
    for term in source_ner:
        normalized = normalize_entity(term)
        if normalized:
            merged.add(
                Entity(surface=normalized, normalized=normalized,
                       category="ingredient")
            )
    for entity in a:
        merged.add(entity)
    for entity in b:
        merged.add(entity)
    return merged


def extend_record(
    record: "RecipeRecord",
    gaz: Gazetteer,
    verbs: Iterable[str] = DEFAULT_PROCESS_VERBS,
) -> "RecipeRecord":
    """Fill one record's extended entity set; the record itself is untouched."""
    joined = " ".join(record.directions)
    extended = merge_entities(
        record.ner,
        extract_pattern(joined, verbs),
        extract_gazetteer(joined, gaz),
    )
    return replace(record, extended_ner=extended)


def extend_corpus(
    records: Iterable["RecipeRecord"],
    gaz: Gazetteer,
    verbs: Iterable[str] = DEFAULT_PROCESS_VERBS,
) -> list["RecipeRecord"]:
    """Compute extended entity sets for a whole corpus.

    The gazetteer should be built from the same records (or a superset).
    Idempotent: extending an already-extended corpus recomputes the same
    sets from the unchanged source fields.
    """
    return [extend_record(record, gaz, verbs) for record in records]

"""Deterministic synthetic recipe corpora for desk-scale experiments.

Each genre owns a disjoint keyword pool; titles and directions are sampled
as keyword/noise mixtures, so the genre signal strength is set by the
mixing rate (1.0 gives keywords only and a perfectly separable corpus).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .corpus import Genre, RecipeRecord

KEYWORD_POOLS: dict[Genre, tuple[str, ...]] = {
    Genre.BAKERY: (
        "flour", "dough", "yeast", "frosting", "croissant", "sourdough",
        "muffin", "glaze", "pastry", "biscuit",
    ),
    Genre.DRINKS: (
        "juice", "smoothie", "lemonade", "espresso", "cider", "punch",
        "cocoa", "nectar", "frappe", "soda",
    ),
    Genre.NONVEG: (
        "chicken", "beef", "bacon", "salmon", "shrimp", "turkey",
        "sausage", "lamb", "tuna", "pork",
    ),
    Genre.VEGETABLES: (
        "spinach", "carrot", "zucchini", "broccoli", "kale", "cauliflower",
        "asparagus", "beet", "cabbage", "eggplant",
    ),
    Genre.FASTFOOD: (
        "burger", "fries", "nuggets", "hotdog", "pizza", "taco",
        "milkshake", "slider", "corndog", "nachos",
    ),
    Genre.CEREAL: (
        "oats", "granola", "muesli", "bran", "cornflakes", "porridge",
        "millet", "barley", "quinoa", "buckwheat",
    ),
    Genre.MEAL: (
        "casserole", "stew", "roast", "potpie", "goulash", "lasagna",
        "risotto", "paella", "curry", "chowder",
    ),
    Genre.SIDES: (
        "coleslaw", "pilaf", "stuffing", "cornbread", "gravy", "relish",
        "pickles", "hummus", "fritters", "croutons",
    ),
    Genre.FUSION: (
        "kimchi", "sriracha", "teriyaki", "wasabi", "harissa",
        "chimichurri", "gochujang", "zaatar", "furikake", "ponzu",
    ),
}

NOISE_POOL: tuple[str, ...] = (
    "fresh", "warm", "golden", "tender", "crisp", "creamy", "hearty",
    "rustic", "zesty", "savory", "classic", "family", "garden", "house",
    "style", "special", "simple", "quick",
)


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    per_genre: int = 100
    mixing_rate: float = 0.7
    seed: int = 7
    keyword_pools: dict[Genre, tuple[str, ...]] = field(
        default_factory=lambda: dict(KEYWORD_POOLS)
    )
    noise_pool: tuple[str, ...] = NOISE_POOL
    title_words: int = 4

    def validate(self) -> None:
        if self.per_genre < 1:
            raise ValueError("per_genre must be at least 1")
        if not 0 <= self.mixing_rate <= 1:
            raise ValueError("mixing_rate must lie in [0, 1]")
        seen: dict[str, Genre] = {}
        for genre, pool in self.keyword_pools.items():
            if not pool:
                raise ValueError(f"empty keyword pool for {genre.name}")
            for word in pool:
                if word in seen:
                    raise ValueError(
                        f"keyword {word!r} appears in both "
                        f"{seen[word].name} and {genre.name} pools"
                    )
                seen[word] = genre
        overlap = set(self.noise_pool) & set(seen)
        if overlap:
            raise ValueError(
                f"noise pool overlaps keyword pools: {sorted(overlap)}"
            )
        if set(self.keyword_pools) != set(Genre):
            raise ValueError("keyword pools must cover all nine genres")


DEFAULT_SPEC = SyntheticCorpusSpec()


def gen_synthetic(spec: SyntheticCorpusSpec = DEFAULT_SPEC) -> list[RecipeRecord]:
    """Sample per_genre records per genre; ground-truth labels carry human
    provenance.  Byte-identical output for a fixed spec."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    records: list[RecipeRecord] = []
    record_id = 0
    for genre in Genre:
        pool = spec.keyword_pools[genre]
        for _ in range(spec.per_genre):
            keywords_used: list[str] = []

            def draw() -> str:
                if rng.random() < spec.mixing_rate:
                    word = pool[int(rng.integers(len(pool)))]
                    if word not in keywords_used:
                        keywords_used.append(word)
                    return word
                return spec.noise_pool[
                    int(rng.integers(len(spec.noise_pool)))
                ]

            title_tokens = [draw() for _ in range(spec.title_words)]
            title = " ".join(token.capitalize() for token in title_tokens)
            body = [draw() for _ in range(5)]
            minutes = int(rng.integers(5, 61))
            directions = [
                f"Mix {body[0]} and {body[1]} in a bowl.",
                f"Cook until the {body[2]} is ready, about {minutes} minutes.",
                f"Serve with {body[3]} and {body[4]}.",
            ]
            records.append(
                RecipeRecord(
                    record_id=record_id,
                    title=title,
                    directions=directions,
                    ner=list(keywords_used),
                    genre=genre,
                    provenance="human",
                )
            )
            record_id += 1
    return records


def make_annotation_pool(
    records: Sequence[RecipeRecord], seed_labeled_per_genre: int
) -> tuple[list[RecipeRecord], dict[int, Genre]]:
    """Strip labels for the annotation loop, keeping the first k records of
    each genre as the labeled seed; returns (session corpus, ground truth)."""
    truth = {
        r.record_id: r.genre for r in records if r.genre is not None
    }
    kept: dict[Genre, int] = {genre: 0 for genre in Genre}
    out: list[RecipeRecord] = []
    for record in records:
        if record.genre is not None and kept[record.genre] < seed_labeled_per_genre:
            kept[record.genre] += 1
            out.append(record)
        else:
            out.append(
                replace(record, genre=None, provenance="unlabeled")
            )
    return out, truth

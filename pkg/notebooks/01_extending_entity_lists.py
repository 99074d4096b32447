"""
Extending a recipe's entity list from its directions
====================================================

A recipe arrives with a curated ingredient list, but the directions hide
more: temperatures, cooking times, pan sizes, brand-name equipment, the
processes applied.  Two independent extractors recover them and the union
with the source list becomes the extended entity set.

Run top to bottom:  python notebooks/01_extending_entity_lists.py
"""

from recipeforge.corpus import read_records
from recipeforge.extraction import (
    build_gazetteer,
    extend_corpus,
    extract_gazetteer,
    extract_pattern,
    merge_entities,
    normalize_entity,
)

# ---------------------------------------------------------------------
# Normalization: one canonical key per entity, punctuation dropped,
# case preserved for display but ignored for comparison.
# ---------------------------------------------------------------------
for surface in ["semi-sweet chocolate chips", "lime Jell-O", "9x13",
                "bake 450\\u00b0"]:
    print(f"{surface!r:>35} -> {normalize_entity(surface)!r}")

# ---------------------------------------------------------------------
# The pattern grammar reads one direction at a time.  Temperatures,
# durations, pan sizes, capitalized brand names away from the sentence
# start, and process verbs attached to visible apparatus.
# ---------------------------------------------------------------------
direction = (
    "Spray muffin pan with Pam. Fill 1/2 full. bake 450\\u00b0 for "
    "10 to 12 minutes. Pour rest of mixture in Tupperware container."
)
print("\npattern extractor on a muffin direction:")
for entity in extract_pattern(direction):
    print(f"  {entity.category:<12} {entity.surface}")

# ---------------------------------------------------------------------
# The second extractor is a gazetteer scan: the corpus's own ingredient
# lists become the lexicon, longest match first.
# ---------------------------------------------------------------------
records = read_records("data/oven_pancake.rec")
pancake = records[0]
gazetteer = build_gazetteer(records)
print(f"\ngazetteer terms from the corpus: {sorted(gazetteer.terms)}")

joined = " ".join(pancake.directions)
print("gazetteer hits in the directions:",
      [e.surface for e in extract_gazetteer(joined, gazetteer)])

# ---------------------------------------------------------------------
# Merging: source list first, then the two extracted sets.  Keys are
# normalized, so duplicates collapse and the first surface wins.
# ---------------------------------------------------------------------
merged = merge_entities(
    pancake.ner,
    extract_pattern(joined),
    extract_gazetteer(joined, gazetteer),
)
print(f"\nmerged set ({len(merged)} entities):")
for entity in merged:
    print(f"  {entity.category:<12} {entity.surface}")

# ---------------------------------------------------------------------
# extend_corpus does the same for every record and fills extended_ner.
# Running it twice changes nothing: the computation reads only the
# source fields.
# ---------------------------------------------------------------------
extended = extend_corpus(records, gazetteer)
again = extend_corpus(extended, gazetteer)
assert extended[0].extended_ner.keys() == again[0].extended_ner.keys()
print("\nextend_corpus is idempotent; extended_ner now carries",
      len(extended[0].extended_ner), "entities")

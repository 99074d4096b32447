"""Entity normalization, the pattern grammar, gazetteer matching, merging."""

import numpy as np
import pytest

from recipeforge.corpus import RecipeRecord, Genre
from recipeforge.extraction import (
    DEFAULT_PROCESS_VERBS,
    EntitySet,
    Gazetteer,
    build_gazetteer,
    extend_corpus,
    extract_gazetteer,
    extract_pattern,
    load_verb_lexicon,
    make_entity,
    merge_entities,
    normalize_entity,
)

from conftest import PANNU_KAKKU_EXTENDED


class TestNormalizeEntity:
    def test_hyphen_removal(self):
        assert normalize_entity("semi-sweet chocolate chips") == \
            "semisweet chocolate chips"

    def test_brand_hyphen(self):
        assert normalize_entity("lime Jell-O") == "lime JellO"

    def test_identity_on_clean_input(self):
        assert normalize_entity("butter") == "butter"

    def test_pan_size_survives(self):
        assert normalize_entity("9x13") == "9x13"

    def test_degree_forms_share_a_key(self):
        escaped = normalize_entity("bake 450\\u00b0")
        actual = normalize_entity("bake 450°")
        assert escaped == actual == "bake 450"

    def test_whitespace_collapses(self):
        assert normalize_entity("  brown   sugar ") == "brown sugar"

    def test_all_punctuation_goes_empty(self):
        assert normalize_entity("!!! --- ...") == ""
        assert make_entity("---", "other") is None

    def test_casing_preserved_in_output(self):
        assert normalize_entity("Cool Whip") == "Cool Whip"


class TestEntitySet:
    def test_dedup_is_case_insensitive(self):
        es = EntitySet()
        assert es.add(make_entity("Butter", "ingredient"))
        assert not es.add(make_entity("butter", "ingredient"))
        assert len(es) == 1
        assert es.get("BUTTER").surface == "Butter"

    def test_insertion_order_iteration(self):
        es = EntitySet()
        for name in ["c", "a", "b"]:
            es.add(make_entity(name, "ingredient"))
        assert es.surfaces() == ["c", "a", "b"]

    def test_contains_normalizes(self):
        es = EntitySet([make_entity("Jell-O", "ingredient")])
        assert "jello" in es
        assert "JellO" in es


class TestExtractPattern:
    def test_muffin_direction_containment(self, muffin_direction):
        entities = extract_pattern(muffin_direction)
        for required in ["10 to 12 minutes", "Tupperware", "Pam",
                         "Pour", "Spray"]:
            assert required in entities, f"missing {required}"
        temp = [e for e in entities if e.category == "temperature"]
        assert any("450\\u00b0" in e.surface for e in temp)

    def test_muffin_direction_categories(self, muffin_direction):
        entities = extract_pattern(muffin_direction)
        by_key = {e.key: e.category for e in entities}
        assert by_key["tupperware"] == "equipment"
        assert by_key["pam"] == "equipment"
        assert by_key["pour"] == "process"
        assert by_key["10 to 12 minutes"] == "duration"

    def test_temperature_with_degrees_word(self):
        entities = extract_pattern("Preheat oven to 350 degrees.")
        assert "350 degrees" in entities
        assert entities.get("350 degrees").category == "temperature"

    def test_empty_text(self):
        assert len(extract_pattern("")) == 0

    def test_duration_absorbs_adjacent_verb(self):
        entities = extract_pattern("Bake 40 minutes.")
        assert "Bake 40 minutes" in entities
        assert "bake" not in {e.key for e in entities}

    def test_overnight_literal(self):
        entities = extract_pattern("Refrigerate 3 hours or overnight.")
        assert "overnight" in entities
        assert entities.get("overnight").category == "duration"

    def test_inch_size_token(self):
        entities = extract_pattern("Press into a 13-inch pan.")
        assert "13-inch" in entities
        assert entities.get("13-inch").category == "quantity"

    def test_capitalized_run_mid_sentence(self):
        entities = extract_pattern("Gently stir in Cool Whip.")
        assert "Cool Whip" in entities
        assert entities.get("Cool Whip").category == "equipment"

    def test_sentence_initial_capital_is_not_equipment(self):
        entities = extract_pattern("Then sugar then yeast.")
        assert len(entities) == 0

    def test_bare_verb_without_apparatus_is_dropped(self):
        assert len(extract_pattern("Pour batter into pan.")) == 0

    def test_verb_kept_next_to_equipment(self):
        entities = extract_pattern("Pour rest of mixture in Tupperware.")
        assert "Pour" in entities
        assert "Tupperware" in entities

    def test_custom_verb_lexicon(self, tmp_path):
        path = tmp_path / "verbs.txt"
        path.write_text("Whisk\n\nFold\n", encoding="utf-8")
        verbs = load_verb_lexicon(path)
        assert verbs == ("Whisk", "Fold")
        entities = extract_pattern("Whisk batter in the KitchenAid.", verbs)
        assert "Whisk" in entities


class TestGazetteer:
    def test_document_frequency(self):
        records = [
            RecipeRecord(0, "A", ["x"], ner=["sugar"]),
            RecipeRecord(1, "B", ["x"], ner=["sugar", "salt"]),
        ]
        gaz = build_gazetteer(records)
        assert gaz.terms == {"sugar": 2, "salt": 1}

    def test_per_record_dedup(self):
        records = [RecipeRecord(0, "A", ["x"], ner=["sugar", "Sugar"])]
        gaz = build_gazetteer(records)
        assert gaz.terms == {"sugar": 1}

    def test_empty_corpus(self):
        assert len(build_gazetteer([])) == 0

    def test_single_match(self):
        gaz = Gazetteer({"butter": 3})
        entities = extract_gazetteer("Melt butter in oven", gaz)
        assert entities.surfaces() == ["butter"]
        assert entities.get("butter").category == "ingredient"

    def test_longest_match_wins(self):
        gaz = Gazetteer({"cream cheese": 1, "cream": 5})
        entities = extract_gazetteer("Mix cream cheese and sugar", gaz)
        assert "cream cheese" in entities
        assert "cream" not in entities.keys()

    def test_match_is_emitted_once(self):
        gaz = Gazetteer({"butter": 1})
        entities = extract_gazetteer("butter on butter with butter", gaz)
        assert len(entities) == 1

    def test_empty_gazetteer(self):
        assert len(extract_gazetteer("anything at all", Gazetteer())) == 0

    def test_match_across_punctuation(self):
        gaz = Gazetteer({"jello": 1})
        entities = extract_gazetteer("Dissolve Jell-O in water", gaz)
        assert entities.surfaces() == ["JellO"]


class TestMergeEntities:
    def test_identity_with_dedup(self):
        merged = merge_entities(["butter", "Butter", "semi-sweet chips"],
                                EntitySet(), EntitySet())
        assert merged.surfaces() == ["butter", "semisweet chips"]

    def test_idempotent_union(self):
        a = EntitySet([make_entity("Melt", "process")])
        merged = merge_entities([], a, a)
        assert merged.keys() == {"melt"}

    def test_source_surface_wins_collisions(self):
        a = EntitySet([make_entity("BUTTER", "ingredient")])
        merged = merge_entities(["butter"], a, EntitySet())
        assert merged.surfaces() == ["butter"]

    def test_membership_order_independent(self):
        a = EntitySet([make_entity("Melt", "process")])
        b = EntitySet([make_entity("9x13", "quantity"),
                       make_entity("melt", "process")])
        left = merge_entities(["sugar"], a, b)
        right = merge_entities(["sugar"], b, a)
        assert left.keys() == right.keys()

    def test_superset_of_source(self):
        rng = np.random.default_rng(5)
        words = ["alpha", "beta-x", "Gamma", "delta!!", "eps ilon"]
        for _ in range(50):
            source = [words[i] for i in rng.integers(0, len(words), size=4)]
            merged = merge_entities(source, EntitySet(), EntitySet())
            for term in source:
                key = normalize_entity(term).lower()
                assert key in merged.keys()


class TestExtendCorpus:
    def test_pannu_kakku_golden(self, pannu_kakku):
        gaz = build_gazetteer([pannu_kakku])
        extended = extend_corpus([pannu_kakku], gaz)
        surfaces = {e.surface for e in extended[0].extended_ner}
        assert surfaces == PANNU_KAKKU_EXTENDED

    def test_original_record_untouched(self, pannu_kakku):
        gaz = build_gazetteer([pannu_kakku])
        extend_corpus([pannu_kakku], gaz)
        assert pannu_kakku.extended_ner is None

    def test_idempotence(self, sample_records):
        gaz = build_gazetteer(sample_records)
        once = extend_corpus(sample_records, gaz)
        twice = extend_corpus(once, gaz)
        for a, b in zip(once, twice):
            assert a.extended_ner.keys() == b.extended_ner.keys()

    def test_single_step_freeze(self):
        record = RecipeRecord(
            0, "Ice", ["Freeze the glasses with Tupperware lids."],
            ner=["ice", "mint-leaf"],
        )
        gaz = build_gazetteer([record])
        extended = extend_corpus([record], gaz)[0].extended_ner
        assert "Freeze" in extended
        assert "ice" in extended
        assert "mintleaf" in extended

    def test_superset_property_random(self):
        rng = np.random.default_rng(11)
        vocabulary = ["salt", "black-pepper", "Olive Oil", "9x13", "thyme"]
        records = []
        for i in range(40):
            ner = [vocabulary[j]
                   for j in rng.integers(0, len(vocabulary), size=3)]
            records.append(
                RecipeRecord(i, f"r{i}", ["Stir well. Serve warm."], ner=ner)
            )
        gaz = build_gazetteer(records)
        for record in extend_corpus(records, gaz):
            source_keys = {
                normalize_entity(t).lower() for t in record.ner
            } - {""}
            assert source_keys <= record.extended_ner.keys()

    def test_no_duplicate_keys_anywhere(self, sample_records):
        gaz = build_gazetteer(sample_records)
        for record in extend_corpus(sample_records, gaz):
            keys = [e.key for e in record.extended_ner]
            assert len(keys) == len(set(keys))

    def test_parallel_equals_sequential(self, sample_records):
        from concurrent.futures import ThreadPoolExecutor

        from recipeforge.extraction import extend_record

        gaz = build_gazetteer(sample_records)
        sequential = extend_corpus(sample_records, gaz)
        with ThreadPoolExecutor(max_workers=4) as pool:
            parallel = list(
                pool.map(lambda r: extend_record(r, gaz), sample_records)
            )
        for a, b in zip(sequential, parallel):
            assert a.extended_ner.keys() == b.extended_ner.keys()

    def test_default_verb_lexicon_is_documented_set(self):
        assert "Bake" in DEFAULT_PROCESS_VERBS
        assert "Preheat" in DEFAULT_PROCESS_VERBS
        assert len(DEFAULT_PROCESS_VERBS) == 18

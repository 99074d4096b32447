"""Corpus ingestion, persistence round-trips, stats, splitting, resampling."""

import numpy as np
import pytest

from recipeforge.corpus import (
    GENRE_NAMES,
    CellParseError,
    CorpusFormatError,
    Genre,
    RecipeRecord,
    RecordValidationError,
    corpus_stats,
    decode_list_cell,
    encode_list_cell,
    equalize,
    ingest_csv,
    parse_genre,
    read_records,
    split_stratified,
    write_csv,
    write_records,
)


def make_corpus(counts: dict[Genre, int], start_id: int = 0,
                provenance: str = "human") -> list[RecipeRecord]:
    records = []
    record_id = start_id
    for genre, n in counts.items():
        for _ in range(n):
            records.append(
                RecipeRecord(
                    record_id=record_id,
                    title=f"recipe {record_id}",
                    directions=["Stir."],
                    ner=["salt"],
                    genre=genre,
                    provenance=provenance,
                )
            )
            record_id += 1
    return records


class TestGenreLabels:
    def test_table_ids_fixed(self):
        assert [int(g) for g in Genre] == list(range(1, 10))
        assert GENRE_NAMES[Genre.BAKERY] == "Bakery"
        assert GENRE_NAMES[Genre.FUSION] == "Fusion"

    def test_parse_accepts_csv_casing(self):
        assert parse_genre("bakery") == Genre.BAKERY
        assert parse_genre("drinks") == Genre.DRINKS
        assert parse_genre("nonveg") == Genre.NONVEG
        assert parse_genre("Fast Food") == Genre.FASTFOOD
        assert parse_genre("fastfood") == Genre.FASTFOOD

    def test_parse_rejects_unknown(self):
        with pytest.raises(RecordValidationError):
            parse_genre("dessert")


class TestListCells:
    def test_round_trip(self):
        items = ["Mix well.", 'say "stop"', "450\\u00b0 oven", "back\\slash"]
        assert decode_list_cell(encode_list_cell(items)) == items

    def test_paper_style_cell(self):
        cell = '["Preheat oven to 350 degrees.", "Bake at 375\\u00b0."]'
        assert decode_list_cell(cell) == [
            "Preheat oven to 350 degrees.", "Bake at 375\\u00b0."
        ]

    def test_empty_list(self):
        assert decode_list_cell("[]") == []
        assert encode_list_cell([]) == "[]"

    def test_single_quotes_accepted(self):
        assert decode_list_cell("['butter', 'flour']") == ["butter", "flour"]

    def test_unbalanced_quote_reports_offset(self):
        with pytest.raises(CellParseError) as excinfo:
            decode_list_cell('["butter", "flour]')
        # Offset of the unmatched opening quote within the cell.
        assert excinfo.value.offset == 11

    def test_missing_bracket(self):
        with pytest.raises(CellParseError):
            decode_list_cell('"butter", "flour"')


class TestCsvIngest:
    HEADER = "title,directions,NER,genre,label\n"

    def write(self, tmp_path, body, name="corpus.csv"):
        path = tmp_path / name
        path.write_text(self.HEADER + body, encoding="utf-8")
        return path

    def test_basic_rows(self, tmp_path):
        body = (
            '"No Bake Cheesecake","[""Mix cream cheese and sugar.""]",'
            '"[""cream cheese"", ""sugar""]",bakery,1\n'
            '"Lime Sherbet","[""Freeze it.""]","[""lime Jell-O""]",drinks,2\n'
        )
        records = ingest_csv(self.write(tmp_path, body))
        assert [r.record_id for r in records] == [0, 1]
        assert records[0].genre == Genre.BAKERY
        assert records[0].label == 1
        assert records[1].genre == Genre.DRINKS
        assert records[1].ner == ["lime Jell-O"]
        assert all(r.provenance == "human" for r in records)

    def test_header_only(self, tmp_path):
        assert ingest_csv(self.write(tmp_path, "")) == []

    def test_missing_column(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("title,directions,genre,label\n", encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="NER"):
            ingest_csv(path)

    def test_unknown_genre_names_row(self, tmp_path):
        body = '"Pie","[""Bake.""]","[]",dessert,1\n'
        with pytest.raises(RecordValidationError, match="row 1"):
            ingest_csv(self.write(tmp_path, body))

    def test_unbalanced_cell_quote_reports_position(self, tmp_path):
        body = '"Pie","[""Bake.]","[]",bakery,1\n'
        with pytest.raises(CellParseError, match="row 1"):
            ingest_csv(self.write(tmp_path, body))

    def test_unlabeled_rows_allowed(self, tmp_path):
        body = '"Pie","[""Bake.""]","[]",,\n'
        records = ingest_csv(self.write(tmp_path, body))
        assert records[0].genre is None
        assert records[0].provenance == "unlabeled"

    def test_csv_round_trip(self, tmp_path, sample_records):
        path = tmp_path / "out.csv"
        write_csv(sample_records, path)
        again = ingest_csv(path)
        assert len(again) == len(sample_records)
        for a, b in zip(sample_records, again):
            assert a.title == b.title
            assert a.directions == b.directions
            assert a.ner == b.ner
            assert a.genre == b.genre

    def test_csv_round_trip_with_extended(self, tmp_path, sample_records):
        from recipeforge.extraction import build_gazetteer, extend_corpus

        gaz = build_gazetteer(sample_records)
        extended = extend_corpus(sample_records, gaz)
        path = tmp_path / "ext.csv"
        write_csv(extended, path, fmt="with_extended")
        again = ingest_csv(path, fmt="with_extended")
        for a, b in zip(extended, again):
            assert a.extended_ner.surfaces() == b.extended_ner.surfaces()


class TestCanonicalRecords:
    def test_round_trip(self, tmp_path, sample_records):
        from recipeforge.extraction import build_gazetteer, extend_corpus

        gaz = build_gazetteer(sample_records)
        extended = extend_corpus(sample_records, gaz)
        path = tmp_path / "corpus.rec"
        write_records(extended, path)
        again = read_records(path)
        assert len(again) == len(extended)
        for a, b in zip(extended, again):
            assert a.record_id == b.record_id
            assert a.title == b.title
            assert a.directions == b.directions
            assert a.ner == b.ner
            assert a.genre == b.genre
            assert a.provenance == b.provenance
            assert a.extended_ner.surfaces() == b.extended_ner.surfaces()

    def test_absent_extended_omitted(self, tmp_path):
        record = RecipeRecord(0, "Pie", ["Bake."], ner=[])
        path = tmp_path / "one.rec"
        write_records([record], path)
        line = path.read_text(encoding="utf-8").strip()
        assert "extended_ner" not in line
        assert read_records(path)[0].extended_ner is None

    def test_validation_on_read(self, tmp_path):
        path = tmp_path / "bad.rec"
        path.write_text(
            '{"id": 0, "title": " ", "directions": ["x"], "ner": [], '
            '"genre": null, "label": null, "provenance": "unlabeled"}\n',
            encoding="utf-8",
        )
        with pytest.raises(RecordValidationError):
            read_records(path)

    def test_label_genre_disagreement_rejected(self, tmp_path):
        path = tmp_path / "bad.rec"
        path.write_text(
            '{"id": 0, "title": "Pie", "directions": ["x"], "ner": [], '
            '"genre": "bakery", "label": 2, "provenance": "human"}\n',
            encoding="utf-8",
        )
        with pytest.raises(RecordValidationError):
            read_records(path)


class TestCorpusStats:
    def test_empty(self):
        stats = corpus_stats([])
        assert stats.total == 0
        assert all(
            stats.genre_total(genre) == 0 for genre in Genre
        )

    def test_one_per_genre(self):
        records = make_corpus({genre: 1 for genre in Genre})
        stats = corpus_stats(records)
        for genre in Genre:
            assert stats.genre_total(genre) == 1
            assert stats.per_genre[genre]["machine"] == 0
        assert stats.labeled_total == 9

    def test_provenance_split(self):
        records = make_corpus({Genre.BAKERY: 3})
        records += make_corpus({Genre.BAKERY: 2}, start_id=3,
                               provenance="machine")
        stats = corpus_stats(records)
        assert stats.per_genre[Genre.BAKERY] == {"human": 3, "machine": 2}
        assert stats.provenance_total("human") == 3

    def test_totals_equal_length_random(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            counts = {
                genre: int(rng.integers(0, 6)) for genre in Genre
            }
            records = make_corpus(counts)
            n_unlabeled = int(rng.integers(0, 4))
            for k in range(n_unlabeled):
                records.append(
                    RecipeRecord(10_000 + k, "u", ["Stir."])
                )
            stats = corpus_stats(records)
            assert stats.total == len(records)
            assert stats.unlabeled == n_unlabeled

    def test_published_genre_census(self):
        # Per-genre totals and human/machine columns of the source
        # dataset's census.  Two printed rows (NonVeg, FastFood) are off
        # by one against their own provenance columns; the column sums
        # are the reliable quantities.
        rows = {
            Genre.BAKERY: (160712, 28481, 132231),
            Genre.DRINKS: (353938, 45113, 308825),
            Genre.NONVEG: (315828, 40757, 275070),
            Genre.VEGETABLES: (398677, 56245, 342432),
            Genre.FASTFOOD: (177108, 31476, 145633),
            Genre.CEREAL: (340495, 45677, 294818),
            Genre.MEAL: (53257, 7009, 46248),
            Genre.SIDES: (338497, 37210, 301287),
            Genre.FUSION: (92630, 8028, 84602),
        }
        assert rows[Genre.BAKERY][0] == 28481 + 132231
        assert rows[Genre.MEAL][0] == 53257
        for total, human, machine in rows.values():
            assert abs(total - (human + machine)) <= 1
        assert sum(t for t, _, _ in rows.values()) == 2231142
        assert sum(h for _, h, _ in rows.values()) == 299996
        assert sum(m for _, _, m in rows.values()) == 2231142 - 299996


class TestSplitStratified:
    def test_single_genre_100(self):
        records = make_corpus({Genre.BAKERY: 100})
        split = split_stratified(records, seed=7)
        assert (len(split.train_ids), len(split.val_ids),
                len(split.test_ids)) == (80, 10, 10)

    def test_single_genre_10(self):
        records = make_corpus({Genre.BAKERY: 10})
        split = split_stratified(records, seed=0)
        assert (len(split.train_ids), len(split.val_ids),
                len(split.test_ids)) == (8, 1, 1)

    def test_val_gets_odd_remainder(self):
        records = make_corpus({Genre.BAKERY: 11})
        split = split_stratified(records, seed=0)
        assert (len(split.train_ids), len(split.val_ids),
                len(split.test_ids)) == (8, 2, 1)

    def test_deterministic(self):
        records = make_corpus({Genre.BAKERY: 20, Genre.MEAL: 13})
        a = split_stratified(records, seed=42)
        b = split_stratified(records, seed=42)
        assert a.to_dict() == b.to_dict()
        c = split_stratified(records, seed=43)
        assert a.to_dict() != c.to_dict()

    def test_disjoint_union_random(self):
        rng = np.random.default_rng(9)
        for trial in range(20):
            counts = {
                genre: int(rng.integers(3, 30)) for genre in Genre
            }
            records = make_corpus(counts)
            split = split_stratified(records, seed=trial)
            train, val, test = (set(split.train_ids), set(split.val_ids),
                                set(split.test_ids))
            assert not (train & val or train & test or val & test)
            assert train | val | test == {r.record_id for r in records}

    def test_per_genre_ratio_tolerance(self):
        counts = {Genre.BAKERY: 17, Genre.DRINKS: 23, Genre.MEAL: 41}
        records = make_corpus(counts)
        split = split_stratified(records, seed=1)
        by_id = {r.record_id: r.genre for r in records}
        for genre, n in counts.items():
            train_n = sum(1 for i in split.train_ids if by_id[i] == genre)
            assert abs(train_n - 0.8 * n) <= 1

    def test_rejects_unlabeled(self):
        records = make_corpus({Genre.BAKERY: 5})
        records.append(RecipeRecord(99, "u", ["Stir."]))
        with pytest.raises(RecordValidationError, match="99"):
            split_stratified(records)

    def test_rejects_tiny_genre(self):
        records = make_corpus({Genre.BAKERY: 5, Genre.MEAL: 2})
        with pytest.raises(ValueError, match="Meal"):
            split_stratified(records)

    def test_rejects_bad_ratios(self):
        records = make_corpus({Genre.BAKERY: 10})
        with pytest.raises(ValueError):
            split_stratified(records, ratios=(0.7, 0.2, 0.2))
        with pytest.raises(ValueError):
            split_stratified(records, ratios=(1.0, 0.0, 0.0))


class TestEqualize:
    def test_forced_selection(self):
        records = make_corpus({genre: 1 for genre in Genre})
        out = equalize(records, 1, seed=5)
        assert sorted(r.record_id for r in out) == \
            sorted(r.record_id for r in records)

    def test_exact_counts_and_subset(self):
        records = make_corpus({genre: 5 for genre in Genre})
        out = equalize(records, 3, seed=2)
        assert len(out) == 27
        ids = {r.record_id for r in records}
        per_genre = {genre: 0 for genre in Genre}
        for record in out:
            assert record.record_id in ids
            per_genre[record.genre] += 1
        assert all(count == 3 for count in per_genre.values())

    def test_deterministic(self):
        records = make_corpus({genre: 5 for genre in Genre})
        a = [r.record_id for r in equalize(records, 3, seed=11)]
        b = [r.record_id for r in equalize(records, 3, seed=11)]
        assert a == b

    def test_paper_scale_arithmetic(self):
        # Nine genres at 46K each is the published 414K equalized corpus.
        assert 9 * 46_000 == 414_000

    def test_shortfall_names_genre(self):
        records = make_corpus({genre: 5 for genre in Genre})
        records = [r for r in records if r.genre != Genre.MEAL][:40]
        with pytest.raises(ValueError, match="Meal"):
            equalize(records, 3, seed=0)


class TestRecordValidation:
    def test_blank_title(self):
        with pytest.raises(RecordValidationError):
            RecipeRecord(0, "  ", ["Stir."]).validate()

    def test_no_directions(self):
        with pytest.raises(RecordValidationError):
            RecipeRecord(0, "Pie", []).validate()

    def test_label_without_provenance(self):
        record = RecipeRecord(0, "Pie", ["Bake."], genre=Genre.BAKERY,
                              provenance="unlabeled")
        with pytest.raises(RecordValidationError):
            record.validate()

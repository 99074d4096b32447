"""Synthetic generator, CLI subcommands, and the HTTP service."""

import json

import numpy as np
import pytest

from recipeforge import corpus as corpus_mod
from recipeforge.cli import cli_dispatch
from recipeforge.corpus import Genre, read_records, write_records
from recipeforge.features import FeatureSpec, build_vocabulary, design_matrix
from recipeforge.models import predict_genres, predict_proba_nb, train_nb
from recipeforge.synthetic import (
    KEYWORD_POOLS,
    SyntheticCorpusSpec,
    gen_synthetic,
)


class TestGenSynthetic:
    def test_stats_shape(self, synthetic_corpus):
        stats = corpus_mod.corpus_stats(synthetic_corpus)
        assert stats.total == 900
        for genre in Genre:
            assert stats.genre_total(genre) == 100
            assert stats.per_genre[genre]["human"] == 100

    def test_deterministic_bytes(self, tmp_path):
        spec = SyntheticCorpusSpec(per_genre=10, seed=42)
        a, b = tmp_path / "a.rec", tmp_path / "b.rec"
        write_records(gen_synthetic(spec), a)
        write_records(gen_synthetic(spec), b)
        assert a.read_bytes() == b.read_bytes()

    def test_keywords_only_corpus_is_nb_separable(self):
        records = gen_synthetic(
            SyntheticCorpusSpec(per_genre=30, mixing_rate=1.0, seed=5)
        )
        split = corpus_mod.split_stratified(records, seed=5)
        train = corpus_mod.select_records(records, split.train_ids)
        test = corpus_mod.select_records(records, split.test_ids)
        vocab = build_vocabulary(train, FeatureSpec.TITLE)
        X = design_matrix(train, FeatureSpec.TITLE, vocab)
        y = np.array([int(r.genre) for r in train])
        model = train_nb(X, y)
        X_test = design_matrix(test, FeatureSpec.TITLE, vocab)
        preds = predict_genres(predict_proba_nb(model, X_test))
        golds = np.array([int(r.genre) for r in test])
        assert np.mean(preds == golds) == 1.0

    def test_overlapping_pools_rejected(self):
        pools = dict(KEYWORD_POOLS)
        pools[Genre.DRINKS] = pools[Genre.DRINKS] + ("flour",)
        with pytest.raises(ValueError, match="flour"):
            SyntheticCorpusSpec(keyword_pools=pools).validate()

    def test_ner_lists_are_genre_keywords(self, synthetic_corpus):
        for record in synthetic_corpus[:50]:
            pool = set(KEYWORD_POOLS[record.genre])
            assert set(record.ner) <= pool


@pytest.fixture
def corpus_file(tmp_path, synthetic_corpus):
    path = tmp_path / "corpus.rec"
    write_records(synthetic_corpus, path)
    return path


@pytest.fixture
def pannu_file(tmp_path, pannu_kakku):
    path = tmp_path / "pannu.rec"
    write_records([pannu_kakku], path)
    return path


class TestCli:
    def test_unknown_subcommand_exits_1(self, capsys):
        assert cli_dispatch(["frobnicate"]) == 1

    def test_unknown_flag_exits_1(self):
        assert cli_dispatch(["stats", "--bogus", "x"]) == 1

    def test_help_exits_0(self):
        assert cli_dispatch(["--help"]) == 0

    def test_missing_file_exits_1(self, tmp_path, capsys):
        assert cli_dispatch(["stats", "--in", str(tmp_path / "nope.rec")]) == 1
        assert "error" in capsys.readouterr().err

    def test_gen_synthetic_and_stats(self, tmp_path, capsys):
        out = tmp_path / "c.rec"
        assert cli_dispatch([
            "gen-synthetic", "--out", str(out), "--per-genre", "5",
            "--seed", "3",
        ]) == 0
        capsys.readouterr()
        assert cli_dispatch(["stats", "--in", str(out), "--json"]) == 0
        stdout = capsys.readouterr().out
        payload = json.loads(stdout[stdout.index("{"):])
        assert payload["total"] == 45

    def test_extend_ner_table3_fixture(self, tmp_path, pannu_file, capsys):
        from conftest import PANNU_KAKKU_EXTENDED

        out = tmp_path / "extended.rec"
        assert cli_dispatch([
            "extend-ner", "--in", str(pannu_file), "--out", str(out)
        ]) == 0
        record = read_records(out)[0]
        assert set(record.extended_ner.surfaces()) == PANNU_KAKKU_EXTENDED

    def test_equalize(self, tmp_path, corpus_file, capsys):
        out = tmp_path / "eq.rec"
        assert cli_dispatch([
            "equalize", "--in", str(corpus_file), "--out", str(out),
            "--per-genre", "3", "--seed", "1",
        ]) == 0
        assert len(read_records(out)) == 27

    def test_equalize_insufficient_exits_1(self, tmp_path, corpus_file,
                                           capsys):
        out = tmp_path / "eq.rec"
        assert cli_dispatch([
            "equalize", "--in", str(corpus_file), "--out", str(out),
            "--per-genre", "200",
        ]) == 1

    def test_build_vocab(self, tmp_path, corpus_file):
        out = tmp_path / "vocab.txt"
        assert cli_dispatch([
            "build-vocab", "--in", str(corpus_file), "--out", str(out),
            "--feature", "title",
        ]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[:4] == ["[PAD]", "[UNK]", "[CLS]", "[SEP]"]

    def test_ingest_round_trip(self, tmp_path, sample_records):
        csv_path = tmp_path / "in.csv"
        corpus_mod.write_csv(sample_records, csv_path)
        out = tmp_path / "out.rec"
        assert cli_dispatch([
            "ingest", "--in", str(csv_path), "--out", str(out)
        ]) == 0
        assert len(read_records(out)) == len(sample_records)

    def test_train_then_evaluate(self, tmp_path, corpus_file, capsys):
        run_dir = tmp_path / "run1"
        assert cli_dispatch([
            "train", "--in", str(corpus_file), "--out-dir", str(run_dir),
            "--model", "svm", "--feature", "title", "--epochs", "30",
            "--learning-rate", "0.5", "--seed", "11",
        ]) == 0
        assert (run_dir / "model.bin").exists()
        assert (run_dir / "vocab.txt").exists()
        assert (run_dir / "run_config.json").exists()
        assert cli_dispatch([
            "evaluate", "--run", str(run_dir), "--in", str(corpus_file),
            "--part", "test",
        ]) == 0
        report_file = run_dir / "reports" / "test" / "report.json"
        assert report_file.exists()
        payload = json.loads(report_file.read_text(encoding="utf-8"))
        assert "accuracy" in payload
        assert "resolved config" in capsys.readouterr().err

    def test_config_file_precedence(self, tmp_path, corpus_file, capsys):
        config = tmp_path / "run.conf"
        config.write_text("feature=title-ner\nmax-size=100\n",
                          encoding="utf-8")
        out = tmp_path / "vocab.txt"
        assert cli_dispatch([
            "--config", str(config), "build-vocab", "--in",
            str(corpus_file), "--out", str(out), "--max-size", "50",
        ]) == 0
        # flag beats config file
        assert len(out.read_text(encoding="utf-8").splitlines()) == 50

    def test_experiment_matrix(self, tmp_path, corpus_file, capsys):
        out_dir = tmp_path / "exp"
        assert cli_dispatch([
            "experiment", "--in", str(corpus_file), "--out-dir",
            str(out_dir), "--features", "title", "--models", "nb",
            "--seed", "2",
        ]) == 0
        payload = json.loads(
            (out_dir / "experiment.json").read_text(encoding="utf-8")
        )
        assert payload["rows"][0]["feature"] == "title"
        assert payload["rows"][0]["test_accuracy"] > 0.5
        assert "corpus_sha256" in payload["config"]["params"]

    def test_experiment_rerun_equality(self, tmp_path, corpus_file):
        dirs = [tmp_path / "exp_a", tmp_path / "exp_b"]
        for out_dir in dirs:
            assert cli_dispatch([
                "experiment", "--in", str(corpus_file), "--out-dir",
                str(out_dir), "--features", "title", "--models", "nb",
                "--seed", "2",
            ]) == 0
        assert (dirs[0] / "experiment.json").read_bytes() == \
            (dirs[1] / "experiment.json").read_bytes()

    def test_experiment_block_mode(self, tmp_path, corpus_file):
        out_dir = tmp_path / "exp_blocks"
        assert cli_dispatch([
            "experiment", "--in", str(corpus_file), "--out-dir",
            str(out_dir), "--features", "title", "--models", "nb",
            "--block-size", "300", "--seed", "2",
        ]) == 0
        payload = json.loads(
            (out_dir / "experiment.json").read_text(encoding="utf-8")
        )
        row = payload["rows"][0]
        assert row["blocks"] == 3
        assert len(row["block_accuracies"]) == 3

    def test_data_dir_env_resolves_inputs(self, tmp_path, monkeypatch,
                                          corpus_file, capsys):
        monkeypatch.setenv("RECIPEFORGE_DATA_DIR", str(corpus_file.parent))
        monkeypatch.chdir(tmp_path / "..")
        assert cli_dispatch(["stats", "--in", corpus_file.name]) == 0

    def test_annotate_scripted_loop(self, tmp_path, monkeypatch, capsys):
        records = gen_synthetic(
            SyntheticCorpusSpec(per_genre=4, mixing_rate=1.0, seed=2)
        )
        from recipeforge.synthetic import make_annotation_pool

        session_records, truth = make_annotation_pool(records, 3)
        path = tmp_path / "pool.rec"
        write_records(session_records, path)
        answers = iter(
            [str(int(truth[r.record_id])) for r in session_records
             if r.genre is None] + ["q"] * 20
        )
        monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
        checkpoint = tmp_path / "session.ckpt"
        assert cli_dispatch([
            "annotate", "--in", str(path), "--batch", "3",
            "--tau", "0.9", "--feature", "title-ner",
            "--checkpoint", str(checkpoint),
        ]) == 0
        assert checkpoint.exists()
        out = capsys.readouterr().out
        assert "labeled:" in out

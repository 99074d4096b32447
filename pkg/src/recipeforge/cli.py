"""Command-line pipeline: ingest, extend, train, evaluate, annotate, serve.

Every run echoes its resolved configuration and seed; commands that write
a run directory drop the same configuration next to their outputs so the
run can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import active_learning as al
from . import corpus as corpus_mod
from . import evaluation, extraction, features, models, synthetic
from .corpus import (
    GENRE_NAMES,
    CorpusFormatError,
    Genre,
    RecordValidationError,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTERNAL = 2

DATA_DIR_ENV = "RECIPEFORGE_DATA_DIR"


@dataclass
class RunConfig:
    command: str
    seed: int
    params: dict

    def to_dict(self) -> dict:
        return {"command": self.command, "seed": self.seed,
                "params": self.params}

    def echo(self) -> None:
        # diagnostics stay off stdout so --json output remains parseable
        print(
            f"[recipeforge] resolved config: "
            f"{json.dumps(self.to_dict(), sort_keys=True)}",
            file=sys.stderr,
        )

    def write(self, out_dir: Path) -> None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "run_config.json").write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )


def load_config_file(path: str | Path) -> dict:
    """Simple key=value configuration; '#' starts a comment line."""
    values: dict[str, str] = {}
    for line_number, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(
                f"{path} line {line_number}: expected key=value"
            )
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def resolve(args: argparse.Namespace, key: str, default, cast=None):
    """Precedence: command-line flag > config file entry > default."""
    value = getattr(args, key.replace("-", "_"), None)
    if value is None and getattr(args, "_config_values", None):
        value = args._config_values.get(key)
    if value is None:
        return default
    return cast(value) if cast is not None else value


def data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "."))


def _resolve_path(path: str) -> Path:
    candidate = Path(path)
    if candidate.exists() or candidate.is_absolute():
        return candidate
    fallback = data_dir() / path
    return fallback if fallback.exists() else candidate


def _read_corpus(path: str, fmt: str | None = None) -> list:
    resolved = _resolve_path(path)
    if resolved.suffix == ".csv":
        return corpus_mod.ingest_csv(resolved, fmt or "without_extended")
    return corpus_mod.read_records(resolved)


def _file_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def cmd_ingest(args) -> int:
    fmt = resolve(args, "format", "without_extended")
    RunConfig("ingest", resolve(args, "seed", 0, int),
              {"input": str(args.input), "format": fmt,
               "out": str(args.output)}).echo()
    records = corpus_mod.ingest_csv(_resolve_path(args.input), fmt)
    corpus_mod.write_records(records, args.output)
    print(f"[recipeforge] ingested {len(records)} records -> {args.output}")
    return EXIT_OK


def cmd_stats(args) -> int:
    RunConfig("stats", 0, {"input": str(args.input)}).echo()
    records = _read_corpus(args.input)
    stats = corpus_mod.corpus_stats(records)
    if args.json:
        print(json.dumps(stats.to_dict(), indent=2, sort_keys=True))
        return EXIT_OK
    print(f"{'genre':<12}{'total':>8}{'human':>8}{'machine':>9}")
    for genre in Genre:
        counts = stats.per_genre[genre]
        print(
            f"{GENRE_NAMES[genre]:<12}{stats.genre_total(genre):>8}"
            f"{counts['human']:>8}{counts['machine']:>9}"
        )
    print(f"{'unlabeled':<12}{stats.unlabeled:>8}")
    print(f"{'total':<12}{stats.total:>8}")
    return EXIT_OK


def cmd_extend_ner(args) -> int:
    RunConfig("extend-ner", 0,
              {"input": str(args.input), "out": str(args.output),
               "verbs": args.verbs}).echo()
    records = _read_corpus(args.input)
    verbs = (
        extraction.load_verb_lexicon(args.verbs)
        if args.verbs
        else extraction.DEFAULT_PROCESS_VERBS
    )
    gaz = extraction.build_gazetteer(records)
    extended = extraction.extend_corpus(records, gaz, verbs)
    corpus_mod.write_records(extended, args.output)
    print(
        f"[recipeforge] extended {len(extended)} records "
        f"(gazetteer terms: {len(gaz)}) -> {args.output}"
    )
    return EXIT_OK


def cmd_build_vocab(args) -> int:
    spec = features.FeatureSpec.parse(resolve(args, "feature", "title"))
    max_size = resolve(args, "max-size", features.DEFAULT_MAX_SIZE, int)
    min_df = resolve(args, "min-df", features.DEFAULT_MIN_DF, int)
    RunConfig("build-vocab", 0,
              {"input": str(args.input), "feature": spec.value,
               "max_size": max_size, "min_df": min_df}).echo()
    records = _read_corpus(args.input)
    vocab = features.build_vocabulary(
        records, spec, max_size=max_size, min_df=min_df
    )
    vocab.save(args.output)
    print(
        f"[recipeforge] vocabulary of {vocab.size} entries "
        f"({vocab.n_terms} terms) -> {args.output}"
    )
    return EXIT_OK


def cmd_equalize(args) -> int:
    seed = resolve(args, "seed", 0, int)
    RunConfig("equalize", seed,
              {"input": str(args.input), "per_genre": args.per_genre,
               "out": str(args.output)}).echo()
    records = _read_corpus(args.input)
    chosen = corpus_mod.equalize(
        corpus_mod.labeled_records(records), args.per_genre, seed
    )
    corpus_mod.write_records(chosen, args.output)
    print(f"[recipeforge] equalized to {len(chosen)} records -> {args.output}")
    return EXIT_OK


def cmd_gen_synthetic(args) -> int:
    spec = synthetic.SyntheticCorpusSpec(
        per_genre=resolve(args, "per-genre", 100, int),
        mixing_rate=resolve(args, "mixing", 0.7, float),
        seed=resolve(args, "seed", 7, int),
    )
    records = synthetic.gen_synthetic(spec)
    corpus_mod.write_records(records, args.output)
    config = RunConfig(
        command="gen-synthetic",
        seed=spec.seed,
        params={
            "per_genre": spec.per_genre,
            "mixing_rate": spec.mixing_rate,
            "out": str(args.output),
        },
    )
    config.echo()
    print(f"[recipeforge] wrote {len(records)} synthetic records "
          f"-> {args.output}")
    return EXIT_OK


def _train_config(args) -> models.TrainConfig:
    kind = resolve(args, "model", "logreg")
    default_rate = 1e-5 if kind == "mlp" else 0.1
    return models.TrainConfig(
        learning_rate=resolve(args, "learning-rate", default_rate, float),
        batch_size=resolve(args, "batch-size", 128, int),
        epochs=resolve(args, "epochs", 10, int),
        warmup_fraction=resolve(args, "warmup-fraction", 0.2, float),
        weight_decay=resolve(args, "weight-decay", 0.01, float),
        seed=resolve(args, "seed", 0, int),
    )


def _train_one(
    kind: str,
    train_records,
    spec: features.FeatureSpec,
    vocab: features.Vocabulary,
    cfg: models.TrainConfig,
    forest_trees: int,
    forest_depth: int,
):
    labels = np.array([int(r.genre) for r in train_records], dtype=np.int64)
    if kind == "mlp":
        X = features.sequence_matrix(train_records, spec, vocab)
        return models.train_mlp(X, labels, cfg, vocab_size=vocab.size)
    X = features.design_matrix(train_records, spec, vocab)
    if kind == "nb":
        return models.train_nb(X, labels)
    if kind == "logreg":
        return models.train_logreg(X, labels, cfg)
    if kind == "svm":
        return models.train_svm(X, labels, cfg)
    if kind == "forest":
        return models.train_forest(
            X, labels, trees=forest_trees, max_depth=forest_depth,
            seed=cfg.seed,
        )
    raise ValueError(
        f"unknown model kind {kind!r}; expected one of {models.MODEL_KINDS}"
    )


def cmd_train(args) -> int:
    records = _read_corpus(args.input)
    labeled = corpus_mod.labeled_records(records)
    spec = features.FeatureSpec.parse(resolve(args, "feature", "title"))
    kind = resolve(args, "model", "logreg")
    cfg = _train_config(args)
    seed = resolve(args, "seed", 0, int)
    split = corpus_mod.split_stratified(labeled, seed=seed)
    train_records = corpus_mod.select_records(labeled, split.train_ids)
    vocab = features.build_vocabulary(
        train_records,
        spec,
        max_size=resolve(args, "max-size", features.DEFAULT_MAX_SIZE, int),
        min_df=resolve(args, "min-df", features.DEFAULT_MIN_DF, int),
    )
    model = _train_one(
        kind, train_records, spec, vocab, cfg,
        resolve(args, "trees", 50, int),
        resolve(args, "max-depth", 12, int),
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    models.save_model(model, out_dir / "model.bin")
    vocab.save(out_dir / "vocab.txt")
    (out_dir / "split.json").write_text(
        json.dumps(split.to_dict(), sort_keys=True) + "\n", encoding="utf-8"
    )
    config = RunConfig(
        command="train",
        seed=seed,
        params={
            "input": str(args.input),
            "feature": spec.value,
            "model": kind,
            "train_config": asdict(cfg),
        },
    )
    config.echo()
    config.write(out_dir)
    print(f"[recipeforge] trained {kind} on {len(train_records)} records "
          f"-> {out_dir / 'model.bin'}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    run_dir = Path(args.run)
    model = models.load_model(run_dir / "model.bin")
    vocab = features.Vocabulary.load(run_dir / "vocab.txt")
    run_config = json.loads(
        (run_dir / "run_config.json").read_text(encoding="utf-8")
    )
    spec = features.FeatureSpec.parse(run_config["params"]["feature"])
    records = _read_corpus(args.input)
    labeled = corpus_mod.labeled_records(records)
    split = corpus_mod.DatasetSplit.from_dict(
        json.loads((run_dir / "split.json").read_text(encoding="utf-8"))
    )
    part = resolve(args, "part", "test")
    ids = {
        "train": split.train_ids,
        "val": split.val_ids,
        "test": split.test_ids,
    }.get(part)
    if ids is None:
        raise ValueError(f"unknown split part {part!r}")
    subset = corpus_mod.select_records(labeled, ids)
    report = evaluation.evaluate(model, subset, vocab, spec, split=part)
    out_dir = Path(args.out_dir) if args.out_dir else run_dir / "reports" / part
    report_path = evaluation.write_report(report, out_dir)
    config = RunConfig(
        command="evaluate",
        seed=run_config["seed"],
        params={"run": str(run_dir), "part": part, "input": str(args.input)},
    )
    config.echo()
    config.write(out_dir)
    print(report.render_table())
    print(f"[recipeforge] report -> {report_path}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    corpus_path = _resolve_path(args.input)
    records = _read_corpus(args.input)
    labeled = corpus_mod.labeled_records(records)
    seed = resolve(args, "seed", 0, int)
    per_genre = resolve(args, "equalize-per-genre", 0, int)
    if per_genre:
        labeled = corpus_mod.equalize(labeled, per_genre, seed)
    feature_names = args.features or ["title", "title-ner", "title-extner"]
    model_names = args.models or ["nb", "logreg", "svm"]
    specs = [features.FeatureSpec.parse(name) for name in feature_names]
    needs_extension = features.FeatureSpec.TITLE_EXTNER in specs and any(
        r.extended_ner is None for r in labeled
    )
    if needs_extension:
        gaz = extraction.build_gazetteer(labeled)
        labeled = extraction.extend_corpus(labeled, gaz)
    cfg = _train_config(args)
    block_size = resolve(args, "block-size", 0, int)
    split = corpus_mod.split_stratified(labeled, seed=seed)
    test_records = corpus_mod.select_records(labeled, split.test_ids)
    train_ids = split.train_ids
    blocks = (
        [train_ids[i : i + block_size]
         for i in range(0, len(train_ids), block_size)]
        if block_size
        else [train_ids]
    )
    rows = []
    for spec in specs:
        for kind in model_names:
            block_accuracies = []
            for block_ids in blocks:
                train_records = corpus_mod.select_records(labeled, block_ids)
                vocab = features.build_vocabulary(train_records, spec)
                model = _train_one(
                    kind, train_records, spec, vocab, cfg,
                    resolve(args, "trees", 50, int),
                    resolve(args, "max-depth", 12, int),
                )
                report = evaluation.evaluate(
                    model, test_records, vocab, spec, split="test"
                )
                block_accuracies.append(report.accuracy)
            rows.append(
                {
                    "feature": spec.value,
                    "model": kind,
                    "blocks": len(blocks),
                    "test_accuracy": float(np.mean(block_accuracies)),
                    "block_accuracies": block_accuracies,
                }
            )
    config = RunConfig(
        command="experiment",
        seed=seed,
        params={
            "corpus_sha256": _file_hash(corpus_path),
            "features": [s.value for s in specs],
            "models": model_names,
            "equalize_per_genre": per_genre,
            "block_size": block_size,
            "train_config": asdict(cfg),
        },
    )
    config.echo()
    print(f"{'feature':<14}{'model':<10}{'test acc':>10}")
    for row in rows:
        print(
            f"{row['feature']:<14}{row['model']:<10}"
            f"{row['test_accuracy']:>10.4f}"
        )
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "experiment.json").write_text(
            json.dumps({"config": config.to_dict(), "rows": rows},
                       indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        config.write(out_dir)
        print(f"[recipeforge] table -> {out_dir / 'experiment.json'}")
    return EXIT_OK


def cmd_annotate(args) -> int:
    records = _read_corpus(args.input)
    session = al.create_session(
        records,
        spec=features.FeatureSpec.parse(resolve(args, "feature", "title")),
        batch_size=resolve(args, "batch", 9, int),
        tau=resolve(args, "tau", 0.99, float),
        seed=resolve(args, "seed", 0, int),
    )
    config = RunConfig(
        command="annotate",
        seed=session.seed,
        params={
            "input": str(args.input),
            "batch": session.batch_size,
            "tau": session.tau,
            "feature": session.spec.value,
        },
    )
    config.echo()
    summary = al.run_annotation_round(session)
    while True:
        print(
            f"round {summary.round}: auto-labeled "
            f"{len(summary.auto_labeled)}, pool {summary.pool_remaining}"
        )
        if not session.queried:
            print("pool empty; annotation finished")
            break
        labels: dict[int, int] = {}
        quit_requested = False
        for record_id in list(session.queried):
            record = session.records[record_id]
            print(f"\n#{record.record_id}: {record.title}")
            for step in record.directions:
                print(f"  - {step}")
            answer = input("genre 1-9 (s skip, q quit)? ").strip().lower()
            if answer == "q":
                quit_requested = True
                break
            if answer == "s":
                continue
            if answer.isdigit() and 1 <= int(answer) <= 9:
                labels[record_id] = int(answer)
            else:
                print(f"ignored {answer!r}")
        if quit_requested:
            break
        summary = al.run_annotation_round(session, labels)
        if args.checkpoint:
            al.save_session(session, args.checkpoint)
    if args.checkpoint:
        al.save_session(session, args.checkpoint)
        print(f"[recipeforge] session checkpoint -> {args.checkpoint}")
    counts = session.labeled_counts()
    print(
        f"labeled: {counts['human']} human, {counts['machine']} machine; "
        f"pool {len(session.pool_ids)}"
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    records = _read_corpus(args.input)
    static = Path(args.static) if args.static else None
    app = create_app({args.corpus_id: records}, static_dir=static)
    config = RunConfig(
        command="serve",
        seed=resolve(args, "seed", 0, int),
        params={
            "input": str(args.input),
            "corpus_id": args.corpus_id,
            "host": args.host,
            "port": args.port,
        },
    )
    config.echo()
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recipeforge",
        description="Recipe entity extension, genre classification, and "
        "committee-driven annotation.",
    )
    parser.add_argument("--config", help="key=value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="CSV corpus -> canonical record file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--format", choices=["with_extended", "without_extended"])
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="per-genre, per-provenance counts")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("extend-ner", help="fill extended entity sets")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--verbs", help="process-verb lexicon file")
    p.set_defaults(func=cmd_extend_ner)

    p = sub.add_parser("build-vocab", help="frozen vocabulary file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--feature")
    p.add_argument("--max-size", type=int)
    p.add_argument("--min-df", type=int)
    p.set_defaults(func=cmd_build_vocab)

    p = sub.add_parser("equalize", help="sample n records per genre")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--per-genre", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_equalize)

    p = sub.add_parser("gen-synthetic", help="deterministic synthetic corpus")
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--per-genre", type=int)
    p.add_argument("--mixing", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gen_synthetic)

    def add_train_flags(p):
        p.add_argument("--feature")
        p.add_argument("--model")
        p.add_argument("--learning-rate", type=float)
        p.add_argument("--batch-size", type=int)
        p.add_argument("--epochs", type=int)
        p.add_argument("--warmup-fraction", type=float)
        p.add_argument("--weight-decay", type=float)
        p.add_argument("--seed", type=int)
        p.add_argument("--max-size", type=int)
        p.add_argument("--min-df", type=int)
        p.add_argument("--trees", type=int)
        p.add_argument("--max-depth", type=int)

    p = sub.add_parser("train", help="train one model on the 80/10/10 split")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir", required=True)
    add_train_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="metrics for a trained run")
    p.add_argument("--run", required=True, help="directory written by train")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--part", choices=["train", "val", "test"])
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "experiment", help="feature x model accuracy matrix"
    )
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out-dir")
    p.add_argument("--features", nargs="*")
    p.add_argument("--models", nargs="*")
    p.add_argument("--equalize-per-genre", type=int)
    p.add_argument("--block-size", type=int)
    add_train_flags(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("annotate", help="terminal annotation loop")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--batch", type=int)
    p.add_argument("--tau", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--feature")
    p.add_argument("--checkpoint", help="session checkpoint file")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("serve", help="HTTP annotation service")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--corpus-id", default="default")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", help="directory of built UI assets")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_serve)

    return parser


def cli_dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_VALIDATION
    if args.config:
        args._config_values = load_config_file(args.config)
    else:
        args._config_values = {}
    try:
        return args.func(args)
    except (
        ValueError,
        CorpusFormatError,
        RecordValidationError,
        FileNotFoundError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # pragma: no cover - internal failures
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()

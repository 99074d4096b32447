"""Classification metrics: confusion, precision/recall/F1, ROC/AUC, reports."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import GENRE_NAMES, Genre, RecipeRecord
from .features import FeatureSpec, Vocabulary, design_matrix, sequence_matrix
from .models import (
    KIND_NAMES,
    N_GENRES,
    MlpModel,
    model_kind,
    predict_genres,
    predict_proba,
)


def confusion(golds: Sequence[int], preds: Sequence[int]) -> np.ndarray:
    """9x9 count matrix, rows gold, columns predicted; labels are 1..9."""
    golds = np.asarray(golds, dtype=np.int64)
    preds = np.asarray(preds, dtype=np.int64)
    if golds.shape != preds.shape:
        raise ValueError(
            f"gold/prediction length mismatch: {len(golds)} vs {len(preds)}"
        )
    for name, values in (("gold", golds), ("predicted", preds)):
        if values.size and (values.min() < 1 or values.max() > N_GENRES):
            raise ValueError(f"{name} labels must lie in 1..{N_GENRES}")
    matrix = np.zeros((N_GENRES, N_GENRES), dtype=np.int64)
    np.add.at(matrix, (golds - 1, preds - 1), 1)
    return matrix


@dataclass
class PrfResult:
    precision: np.ndarray  # (9,)
    recall: np.ndarray
    f1: np.ndarray
    undefined: list[str]  # flags like "precision:Meal" where 0/0 occurred
    macro_precision: float
    macro_recall: float
    macro_f1: float


def precision_recall_f1(matrix: np.ndarray) -> PrfResult:
    """Per-genre triples from a confusion matrix.

    0/0 cases are reported as 0 with an 'undefined' flag and excluded from
    the macro averages.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    diag = np.diag(matrix)
    col = matrix.sum(axis=0)
    row = matrix.sum(axis=1)
    precision = np.zeros(N_GENRES)
    recall = np.zeros(N_GENRES)
    f1 = np.zeros(N_GENRES)
    undefined: list[str] = []
    p_defined = np.zeros(N_GENRES, dtype=bool)
    r_defined = np.zeros(N_GENRES, dtype=bool)
    for g in range(N_GENRES):
        name = GENRE_NAMES[Genre(g + 1)]
        if col[g] > 0:
            precision[g] = diag[g] / col[g]
            p_defined[g] = True
        else:
            undefined.append(f"precision:{name}")
        if row[g] > 0:
            recall[g] = diag[g] / row[g]
            r_defined[g] = True
        else:
            undefined.append(f"recall:{name}")
        if precision[g] + recall[g] > 0:
            f1[g] = 2 * precision[g] * recall[g] / (precision[g] + recall[g])
    f_defined = p_defined | r_defined
    return PrfResult(
        precision=precision,
        recall=recall,
        f1=f1,
        undefined=undefined,
        macro_precision=float(precision[p_defined].mean()) if p_defined.any() else 0.0,
        macro_recall=float(recall[r_defined].mean()) if r_defined.any() else 0.0,
        macro_f1=float(f1[f_defined].mean()) if f_defined.any() else 0.0,
    )


@dataclass
class RocCurve:
    thresholds: np.ndarray  # descending; leading +inf for the (0, 0) point
    fpr: np.ndarray
    tpr: np.ndarray

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def roc_curve(
    scores: Sequence[float], golds: Sequence[int], genre: str | int = "?"
) -> RocCurve:
    """One-vs-rest ROC: thresholds swept over distinct scores descending.

    `golds` is binary membership of the target genre.  Needs at least one
    positive and one negative sample.
    """
    scores = np.asarray(scores, dtype=np.float64)
    golds = np.asarray(golds, dtype=np.int64)
    if scores.shape != golds.shape:
        raise ValueError("scores and golds must align")
    n_pos = int(golds.sum())
    n_neg = len(golds) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError(
            f"genre {genre}: ROC needs both classes "
            f"({n_pos} positive, {n_neg} negative)"
        )
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_golds = golds[order]
    tps = np.cumsum(sorted_golds)
    fps = np.cumsum(1 - sorted_golds)
    distinct = np.nonzero(np.diff(sorted_scores))[0]
    cut = np.concatenate([distinct, [len(scores) - 1]])
    thresholds = np.concatenate([[np.inf], sorted_scores[cut]])
    tpr = np.concatenate([[0.0], tps[cut] / n_pos])
    fpr = np.concatenate([[0.0], fps[cut] / n_neg])
    return RocCurve(thresholds=thresholds, fpr=fpr, tpr=tpr)


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the ROC curve."""
    return float(np.trapezoid(curve.tpr, curve.fpr))


def auc_pair_count(scores: Sequence[float], golds: Sequence[int]) -> float:
    """Pair-counting statistic: (concordant + ties/2) / (P * N).

    Independent of the trapezoid path; the two must agree to 1e-12.
    """
    scores = np.asarray(scores, dtype=np.float64)
    golds = np.asarray(golds, dtype=np.int64)
    pos = scores[golds == 1]
    neg = scores[golds == 0]
    if len(pos) == 0 or len(neg) == 0:
        raise ValueError("pair counting needs both classes")
    diff = pos[:, None] - neg[None, :]
    concordant = np.count_nonzero(diff > 0)
    ties = np.count_nonzero(diff == 0)
    return (concordant + 0.5 * ties) / (len(pos) * len(neg))


@dataclass
class MetricsReport:
    accuracy: float
    confusion: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_precision: float
    macro_recall: float
    macro_f1: float
    auc_per_genre: dict[int, float]  # genre id -> one-vs-rest AUC
    macro_auc: float
    undefined: list[str]
    split: str = "test"
    feature: str = ""
    model: str = ""
    n_records: int = 0
    roc_curves: dict[int, RocCurve] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "feature": self.feature,
            "split": self.split,
            "n_records": self.n_records,
            "accuracy": self.accuracy,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
            "macro_f1": self.macro_f1,
            "macro_auc": self.macro_auc,
            "per_genre": {
                GENRE_NAMES[Genre(g + 1)]: {
                    "precision": float(self.precision[g]),
                    "recall": float(self.recall[g]),
                    "f1": float(self.f1[g]),
                    "auc": self.auc_per_genre.get(g + 1),
                }
                for g in range(N_GENRES)
            },
            "confusion": self.confusion.tolist(),
            "undefined": list(self.undefined),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MetricsReport":
        per_genre = payload["per_genre"]
        precision = np.zeros(N_GENRES)
        recall = np.zeros(N_GENRES)
        f1 = np.zeros(N_GENRES)
        auc_per_genre = {}
        for g in range(N_GENRES):
            row = per_genre[GENRE_NAMES[Genre(g + 1)]]
            precision[g] = row["precision"]
            recall[g] = row["recall"]
            f1[g] = row["f1"]
            if row.get("auc") is not None:
                auc_per_genre[g + 1] = row["auc"]
        return cls(
            accuracy=payload["accuracy"],
            confusion=np.asarray(payload["confusion"], dtype=np.int64),
            precision=precision,
            recall=recall,
            f1=f1,
            macro_precision=payload["macro_precision"],
            macro_recall=payload["macro_recall"],
            macro_f1=payload["macro_f1"],
            auc_per_genre=auc_per_genre,
            macro_auc=payload["macro_auc"],
            undefined=list(payload["undefined"]),
            split=payload["split"],
            feature=payload["feature"],
            model=payload["model"],
            n_records=payload["n_records"],
        )

    def render_table(self) -> str:
        lines = [
            f"model: {self.model}   feature: {self.feature}   "
            f"split: {self.split}   records: {self.n_records}",
            f"accuracy: {self.accuracy:.4f}",
            "",
            f"{'genre':<12}{'precision':>10}{'recall':>10}"
            f"{'f1':>10}{'auc':>10}",
        ]
        for g in range(N_GENRES):
            name = GENRE_NAMES[Genre(g + 1)]
            auc_val = self.auc_per_genre.get(g + 1)
            auc_text = f"{auc_val:.4f}" if auc_val is not None else "-"
            lines.append(
                f"{name:<12}{self.precision[g]:>10.4f}"
                f"{self.recall[g]:>10.4f}{self.f1[g]:>10.4f}{auc_text:>10}"
            )
        lines.append(
            f"{'macro':<12}{self.macro_precision:>10.4f}"
            f"{self.macro_recall:>10.4f}{self.macro_f1:>10.4f}"
            f"{self.macro_auc:>10.4f}"
        )
        if self.undefined:
            lines.append(f"undefined (0/0, reported as 0): "
                         f"{', '.join(self.undefined)}")
        return "\n".join(lines) + "\n"


def evaluate(
    model,
    records: Sequence[RecipeRecord],
    vocab: Vocabulary,
    spec: FeatureSpec,
    split: str = "test",
) -> MetricsReport:
    """Full metrics for a model over a record list.

    Validates required fields up front, predicts probabilities, and derives
    accuracy, per-genre precision/recall/F1, one-vs-rest ROC AUC, and the
    confusion matrix.  Genres missing a class in the golds get no AUC and
    are flagged.
    """
    if not records:
        raise ValueError("no records to evaluate")
    missing = [r.record_id for r in records if r.genre is None]
    if missing:
        raise ValueError(f"records without gold labels: ids {missing}")
    if spec is FeatureSpec.TITLE_EXTNER:
        bare = [r.record_id for r in records if r.extended_ner is None]
        if bare:
            raise ValueError(
                f"records without extended entities: ids {bare}; "
                "run extend_corpus first"
            )
    if isinstance(model, MlpModel):
        features = sequence_matrix(records, spec, vocab)
    else:
        features = design_matrix(records, spec, vocab)
    probas = predict_proba(model, features)
    golds = np.array([int(r.genre) for r in records], dtype=np.int64)
    preds = predict_genres(probas)
    matrix = confusion(golds, preds)
    prf = precision_recall_f1(matrix)
    accuracy = float(np.trace(matrix)) / len(records)
    auc_per_genre: dict[int, float] = {}
    curves: dict[int, RocCurve] = {}
    undefined = list(prf.undefined)
    for g in range(1, N_GENRES + 1):
        binary = (golds == g).astype(np.int64)
        if binary.sum() in (0, len(binary)):
            undefined.append(f"auc:{GENRE_NAMES[Genre(g)]}")
            continue
        curve = roc_curve(probas[:, g - 1], binary, genre=GENRE_NAMES[Genre(g)])
        curves[g] = curve
        auc_per_genre[g] = auc(curve)
    macro_auc = (
        float(np.mean(list(auc_per_genre.values()))) if auc_per_genre else 0.0
    )
    return MetricsReport(
        accuracy=accuracy,
        confusion=matrix,
        precision=prf.precision,
        recall=prf.recall,
        f1=prf.f1,
        macro_precision=prf.macro_precision,
        macro_recall=prf.macro_recall,
        macro_f1=prf.macro_f1,
        auc_per_genre=auc_per_genre,
        macro_auc=macro_auc,
        undefined=undefined,
        split=split,
        feature=spec.value,
        model=KIND_NAMES[model_kind(model)],
        n_records=len(records),
    )


def write_report(report: MetricsReport, out_dir: str | Path) -> Path:
    """Emit report.json, report.txt, and per-genre ROC point CSVs."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(
        json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    (out / "report.txt").write_text(report.render_table(), encoding="utf-8")
    for g, curve in report.roc_curves.items():
        with open(out / f"roc_genre_{g}.csv", "w", newline="",
                  encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["threshold", "fpr", "tpr"])
            for threshold, fpr, tpr in zip(
                curve.thresholds, curve.fpr, curve.tpr
            ):
                writer.writerow([repr(float(threshold)), repr(float(fpr)),
                                 repr(float(tpr))])
    return out / "report.json"


def read_report(path: str | Path) -> MetricsReport:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return MetricsReport.from_dict(payload)

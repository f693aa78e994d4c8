"""Per-class and macro-averaged precision/recall/F1, with fold aggregation.

Conventions: binary classes pro/opp, precision or recall with an empty
denominator is 0, macro values are unweighted two-class means, the fold
standard deviation uses ddof=1 (0.0 for a single fold).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import EmptyPredictionSet, MisalignedPredictionSets

CLASSES = ("pro", "opp")


@dataclass(frozen=True)
class PredictionRecord:
    adu_id: str  # corpus-wide id, doc_id:adu_id
    gold: str
    pred: str
    score: float
    model: str = ""
    fold: int = 0
    run: int = 0


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class MetricsBlock:
    per_class: dict  # label -> ClassMetrics
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float
    n: int


@dataclass(frozen=True)
class MetricsReport:
    pooled: MetricsBlock
    per_fold: tuple = ()          # ((run, fold), MetricsBlock) pairs
    mean: dict = field(default_factory=dict)  # metric -> (mean, std) over folds


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def _block(records) -> MetricsBlock:
    per_class = {}
    correct = sum(1 for r in records if r.pred == r.gold)
    for cls in CLASSES:
        tp = sum(1 for r in records if r.pred == cls and r.gold == cls)
        fp = sum(1 for r in records if r.pred == cls and r.gold != cls)
        fn = sum(1 for r in records if r.pred != cls and r.gold == cls)
        p = _safe_div(tp, tp + fp)
        rec = _safe_div(tp, tp + fn)
        f1 = _safe_div(2 * p * rec, p + rec)
        per_class[cls] = ClassMetrics(p, rec, f1, tp + fn)
    return MetricsBlock(
        per_class=per_class,
        macro_precision=sum(per_class[c].precision for c in CLASSES) / len(CLASSES),
        macro_recall=sum(per_class[c].recall for c in CLASSES) / len(CLASSES),
        macro_f1=sum(per_class[c].f1 for c in CLASSES) / len(CLASSES),
        accuracy=_safe_div(correct, len(records)),
        n=len(records),
    )


def _mean_std(values) -> tuple[float, float]:
    m = sum(values) / len(values)
    if len(values) < 2:
        return m, 0.0
    var = sum((v - m) ** 2 for v in values) / (len(values) - 1)
    return m, math.sqrt(var)


def compute_metrics(records: list[PredictionRecord]) -> MetricsReport:
    """Pooled metrics plus per-(run, fold) values and their mean/std."""
    if not records:
        raise EmptyPredictionSet("no predictions to score")
    pooled = _block(records)

    groups: dict[tuple[int, int], list[PredictionRecord]] = {}
    for r in records:
        groups.setdefault((r.run, r.fold), []).append(r)
    per_fold = tuple((key, _block(groups[key])) for key in sorted(groups))

    mean = {}
    for name in ("macro_f1", "macro_precision", "macro_recall", "accuracy"):
        mean[name] = _mean_std([getattr(blk, name) for _, blk in per_fold])
    return MetricsReport(pooled=pooled, per_fold=per_fold, mean=mean)


def check_aligned(a: list[PredictionRecord], b: list[PredictionRecord]) -> None:
    ids_a = {r.adu_id for r in a}
    ids_b = {r.adu_id for r in b}
    if len(ids_a) != len(a) or len(ids_b) != len(b):
        raise MisalignedPredictionSets("duplicate adu ids in a prediction set")
    if ids_a != ids_b:
        raise MisalignedPredictionSets("prediction sets cover different adu ids")
    gold_a = {r.adu_id: r.gold for r in a}
    for r in b:
        if gold_a[r.adu_id] != r.gold:
            raise MisalignedPredictionSets(f"gold labels disagree for {r.adu_id}")


@dataclass(frozen=True)
class AgreementTable:
    # cells: (a true, b true), (a true, b false), (a false, b true), (a false, b false)
    cells: dict  # "all" | class label -> (tt, tf, ft, ff)


def agreement_table(a: list[PredictionRecord], b: list[PredictionRecord]) -> AgreementTable:
    """2x2 correctness partition of two aligned prediction sets, per class."""
    check_aligned(a, b)
    b_by_id = {r.adu_id: r for r in b}
    cells = {key: [0, 0, 0, 0] for key in ("all",) + CLASSES}
    for ra in a:
        rb = b_by_id[ra.adu_id]
        ok_a = ra.pred == ra.gold
        ok_b = rb.pred == rb.gold
        cell = 0 if (ok_a and ok_b) else 1 if ok_a else 2 if ok_b else 3
        cells["all"][cell] += 1
        cells[ra.gold][cell] += 1
    return AgreementTable({key: tuple(v) for key, v in cells.items()})


# ---------------------------------------------------------------------------
# file I/O: one JSON object per prediction line

def write_predictions(path, records: list[PredictionRecord]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(json.dumps({
                "adu_id": r.adu_id, "gold": r.gold, "pred": r.pred,
                "score": r.score, "model": r.model, "fold": r.fold, "run": r.run,
            }, ensure_ascii=False) + "\n")


def load_predictions(path) -> list[PredictionRecord]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            row = json.loads(line)
            try:
                out.append(PredictionRecord(
                    adu_id=row["adu_id"], gold=row["gold"], pred=row["pred"],
                    score=float(row["score"]), model=row.get("model", ""),
                    fold=int(row.get("fold", 0)), run=int(row.get("run", 0)),
                ))
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: missing field {exc}") from exc
    return out


def report_to_json(report: MetricsReport) -> str:
    def block(blk: MetricsBlock) -> dict:
        return {
            "per_class": {
                c: {"precision": m.precision, "recall": m.recall,
                    "f1": m.f1, "support": m.support}
                for c, m in blk.per_class.items()
            },
            "macro_precision": blk.macro_precision,
            "macro_recall": blk.macro_recall,
            "macro_f1": blk.macro_f1,
            "accuracy": blk.accuracy,
            "n": blk.n,
        }

    payload = {
        "pooled": block(report.pooled),
        "per_fold": [{"run": k[0], "fold": k[1], **block(blk)} for k, blk in report.per_fold],
        "fold_mean": {name: {"mean": m, "std": s} for name, (m, s) in report.mean.items()},
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def render_report(report: MetricsReport, title: str = "") -> str:
    """Aligned console table: pooled per-class rows plus fold mean +/- std."""
    lines = []
    if title:
        lines.append(title)
    head = f"{'class':<8}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>9}"
    lines.append(head)
    for cls in CLASSES:
        m = report.pooled.per_class[cls]
        lines.append(f"{cls:<8}{m.precision:>10.4f}{m.recall:>10.4f}{m.f1:>10.4f}{m.support:>9d}")
    p = report.pooled
    lines.append(f"{'macro':<8}{p.macro_precision:>10.4f}{p.macro_recall:>10.4f}{p.macro_f1:>10.4f}{p.n:>9d}")
    lines.append(f"accuracy {p.accuracy:.4f} (pooled, n={p.n})")
    if report.mean:
        m_f1 = report.mean["macro_f1"]
        m_p = report.mean["macro_precision"]
        m_r = report.mean["macro_recall"]
        m_a = report.mean["accuracy"]
        lines.append(
            f"folds    macro-F1 {m_f1[0]:.4f}±{m_f1[1]:.4f}  P {m_p[0]:.4f}±{m_p[1]:.4f}"
            f"  R {m_r[0]:.4f}±{m_r[1]:.4f}  acc {m_a[0]:.4f}±{m_a[1]:.4f}"
        )
    return "\n".join(lines) + "\n"

"""File-format consumers and producers shared with the experiment toolkit.

This package talks to the main toolkit exclusively through its documented
file schemas: corpus JSON in, fold-plan JSON in, prediction JSON lines
out.  Units are addressed corpus-wide as ``doc_id:adu_id``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class SchemaError(Exception):
    """Input file does not match the documented schema."""


@dataclass(frozen=True)
class LabeledUnit:
    uid: str
    text: str
    label: str  # "pro" | "opp"


def load_labeled_units(jaas_path) -> list[LabeledUnit]:
    """Pro/opp units of a corpus JSON file, in document reading order."""
    try:
        with open(jaas_path, encoding="utf-8") as f:
            payload = json.load(f)
        units = []
        for doc in payload["documents"]:
            nodes = sorted(doc["nodes"], key=lambda n: n["order_index"])
            for node in nodes:
                if node["role"] in ("pro", "opp"):
                    units.append(LabeledUnit(
                        uid=f"{doc['doc_id']}:{node['adu_id']}",
                        text=node["text"],
                        label=node["role"],
                    ))
        return units
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{jaas_path}: not a valid corpus file ({exc})") from exc


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    folds: tuple[tuple[str, ...], ...]


def load_fold_plan(path) -> FoldPlan:
    try:
        with open(path, encoding="utf-8") as f:
            payload = json.load(f)
        return FoldPlan(
            k=int(payload["k"]),
            seed=int(payload["seed"]),
            folds=tuple(tuple(fold) for fold in payload["folds"]),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise SchemaError(f"{path}: not a valid fold plan ({exc})") from exc


def write_predictions(path, rows: list[dict]) -> None:
    """Prediction lines, bit-compatible with the toolkit's reader."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps({
                "adu_id": row["adu_id"], "gold": row["gold"], "pred": row["pred"],
                "score": row["score"], "model": row["model"],
                "fold": row["fold"], "run": row["run"],
            }, ensure_ascii=False) + "\n")

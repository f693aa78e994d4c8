"""Trained-model container, prediction, and exact JSON round-tripping.

Class encoding is fixed: pro = 0 (the majority class and the tie-break
class at every decision threshold), opp = 1.  Scores are the signed
margin (svm), the opp vote fraction (bagging), or the opp probability
(gbt).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .errors import DegenerateData, DimensionMismatch

LABELS = ("pro", "opp")
KINDS = ("svm", "bagging", "gbt")


@dataclass(frozen=True)
class Tree:
    feat: np.ndarray   # int32, -1 at leaves
    thr: np.ndarray    # float64
    left: np.ndarray   # int32
    right: np.ndarray  # int32
    value: np.ndarray  # float64 leaf payload


@dataclass(frozen=True)
class TrainedModel:
    kind: str
    dim: int
    hyperparams: dict = field(default_factory=dict)
    weights: np.ndarray | None = None  # svm
    bias: float = 0.0                  # svm
    trees: tuple[Tree, ...] = ()
    base_score: float = 0.0            # gbt, logit space


def encode_labels(y) -> np.ndarray:
    """Map pro/opp (strings or 0/1 ints) to an int8 array; both classes required."""
    out = np.empty(len(y), dtype=np.int8)
    for i, label in enumerate(y):
        if label in ("pro", 0):
            out[i] = 0
        elif label in ("opp", 1):
            out[i] = 1
        else:
            raise ValueError(f"unknown label {label!r}")
    if len(out) == 0 or out.min() == out.max():
        raise DegenerateData("training data must contain both classes")
    return out


def as_csr(X) -> sp.csr_matrix:
    M = sp.csr_matrix(X, dtype=np.float64)
    M.eliminate_zeros()  # stored zeros would corrupt the sparse split scan
    M.sort_indices()
    return M


def _csr_parts(M: sp.csr_matrix):
    return (M.indptr.astype(np.int64), M.indices.astype(np.int64), M.data)


def raw_scores(model: TrainedModel, X) -> np.ndarray:
    M = as_csr(X)
    if M.shape[1] != model.dim:
        raise DimensionMismatch(f"expected {model.dim} features, got {M.shape[1]}")
    row_ptr, row_idx, row_val = _csr_parts(M)
    n = M.shape[0]
    if model.kind == "svm":
        return M @ model.weights + model.bias
    acc = np.zeros(n, dtype=np.float64)
    for t in model.trees:
        _kernels.tree_accumulate(row_ptr, row_idx, row_val, n,
                                 t.feat, t.thr, t.left, t.right, t.value, acc)
    if model.kind == "gbt":
        return model.base_score + acc
    return acc / max(len(model.trees), 1)  # bagging vote fraction


def predict(model: TrainedModel, X) -> tuple[np.ndarray, np.ndarray]:
    """Labels and scores for each row; ties at the threshold go to pro."""
    raw = raw_scores(model, X)
    if model.kind == "svm":
        scores = raw
        is_opp = raw > 0.0
    elif model.kind == "gbt":
        scores = 1.0 / (1.0 + np.exp(-raw))
        is_opp = scores > 0.5
    else:
        scores = raw
        is_opp = raw > 0.5
    labels = np.where(is_opp, "opp", "pro")
    return labels, scores


# ---------------------------------------------------------------------------
# serialization: self-describing JSON, floats round-trip exactly via repr

def model_to_json(model: TrainedModel) -> str:
    payload = {
        "kind": model.kind,
        "dim": model.dim,
        "hyperparams": model.hyperparams,
        "label_map": {"pro": 0, "opp": 1},
    }
    if model.kind == "svm":
        payload["weights"] = model.weights.tolist()
        payload["bias"] = model.bias
    else:
        payload["base_score"] = model.base_score
        payload["trees"] = [
            {
                "feat": t.feat.tolist(),
                "thr": t.thr.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "value": t.value.tolist(),
            }
            for t in model.trees
        ]
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def model_from_json(text: str) -> TrainedModel:
    payload = json.loads(text)
    kind = payload["kind"]
    if kind not in KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    if kind == "svm":
        return TrainedModel(
            kind=kind,
            dim=payload["dim"],
            hyperparams=payload["hyperparams"],
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=float(payload["bias"]),
        )
    trees = tuple(
        Tree(
            feat=np.asarray(t["feat"], dtype=np.int32),
            thr=np.asarray(t["thr"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int32),
            right=np.asarray(t["right"], dtype=np.int32),
            value=np.asarray(t["value"], dtype=np.float64),
        )
        for t in payload["trees"]
    )
    return TrainedModel(
        kind=kind,
        dim=payload["dim"],
        hyperparams=payload["hyperparams"],
        trees=trees,
        base_score=float(payload["base_score"]),
    )


def save_model(path, model: TrainedModel) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(model_to_json(model))


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as f:
        return model_from_json(f.read())

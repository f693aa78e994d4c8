"""Deterministic stratified fold plans over labeled units.

Units are addressed corpus-wide as ``doc_id:adu_id``.  Plans are meant
to be written once and reused by every experiment, so the builder is a
pure function of (corpus order, k, seed, unit).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import TooFewInstances


def adu_uid(doc_id: str, adu_id: str) -> str:
    return f"{doc_id}:{adu_id}"


@dataclass(frozen=True)
class FoldPlan:
    k: int
    seed: int
    unit: str  # "adu" | "document"
    folds: tuple[tuple[str, ...], ...]

    def fold_of(self) -> dict[str, int]:
        return {uid: i for i, fold in enumerate(self.folds) for uid in fold}


def stratified_fold_indices(y01, k: int, seed: int) -> list[np.ndarray]:
    """Index folds with both class counts and fold sizes balanced to +/-1.

    Per class, every fold gets floor(n_c/k) members and the remainders go
    one each to the folds with the most remaining capacity (minority
    class first, ties to the lowest fold index).
    """
    y01 = np.asarray(y01)
    n = len(y01)
    rng = np.random.default_rng([seed])
    sizes = [n // k + (1 if f < n % k else 0) for f in range(k)]

    class_order = sorted(np.unique(y01), key=lambda c: (int((y01 == c).sum()), c))
    quota = {c: [int((y01 == c).sum()) // k] * k for c in class_order}
    capacity = [sizes[f] - sum(quota[c][f] for c in class_order) for f in range(k)]
    for c in class_order:
        taken: set[int] = set()  # at most one remainder unit per fold per class
        for _ in range(int((y01 == c).sum()) % k):
            f = max((i for i in range(k) if i not in taken),
                    key=lambda i: (capacity[i], -i))
            quota[c][f] += 1
            capacity[f] -= 1
            taken.add(f)

    folds: list[list[int]] = [[] for _ in range(k)]
    for c in class_order:
        idx = np.flatnonzero(y01 == c)
        idx = idx[rng.permutation(len(idx))]
        pos = 0
        for f in range(k):
            take = quota[c][f]
            folds[f].extend(int(i) for i in idx[pos:pos + take])
            pos += take
    return [np.asarray(sorted(f), dtype=np.int64) for f in folds]


def make_folds(corpus, k: int = 5, seed: int = 0, unit: str = "adu") -> FoldPlan:
    """Stratified k-fold plan over all pro/opp units of a corpus."""
    uids: list[str] = []
    labels: list[int] = []
    doc_of: list[int] = []
    for di, doc in enumerate(corpus):
        for node in sorted(doc.nodes, key=lambda nd: nd.order_index):
            if node.role in ("pro", "opp"):
                uids.append(adu_uid(doc.doc_id, node.adu_id))
                labels.append(0 if node.role == "pro" else 1)
                doc_of.append(di)
    y = np.asarray(labels)
    for c in (0, 1):
        if int((y == c).sum()) < k:
            raise TooFewInstances(
                f"class {'pro' if c == 0 else 'opp'} has {(y == c).sum()} units, need >= {k}"
            )

    if unit == "adu":
        index_folds = stratified_fold_indices(y, k, seed)
    elif unit == "document":
        index_folds = _document_folds(y, np.asarray(doc_of), k, seed)
    else:
        raise ValueError(f"unknown fold unit {unit!r}")

    folds = tuple(tuple(uids[i] for i in f) for f in index_folds)
    return FoldPlan(k=k, seed=seed, unit=unit, folds=folds)


def _document_folds(y01, doc_of, k: int, seed: int) -> list[np.ndarray]:
    """Whole documents per fold; greedy balance of (opp count, size).

    Atomic documents make exact +/-1 stratification unattainable in
    general; this keeps folds as close to the global class mix as the
    document sizes allow.
    """
    rng = np.random.default_rng([seed])
    docs = np.unique(doc_of)
    order = docs[rng.permutation(len(docs))]
    total_opp = int(y01.sum())
    total = len(y01)
    fold_opp = [0] * k
    fold_n = [0] * k
    assign: dict[int, int] = {}
    for d in order:
        mask = doc_of == d
        d_opp = int(y01[mask].sum())
        d_n = int(mask.sum())

        def badness(f):
            n_after = fold_n[f] + d_n
            opp_after = fold_opp[f] + d_opp
            return (abs(opp_after - total_opp * (n_after / total)),
                    n_after, f)

        f = min(range(k), key=badness)
        assign[int(d)] = f
        fold_opp[f] += d_opp
        fold_n[f] += d_n
    return [np.flatnonzero(np.isin(doc_of, [d for d, f in assign.items() if f == fold]))
            for fold in range(k)]


def plan_to_json(plan: FoldPlan) -> str:
    payload = {
        "k": plan.k,
        "seed": plan.seed,
        "unit": plan.unit,
        "folds": [list(f) for f in plan.folds],
    }
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def save_plan(path, plan: FoldPlan) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(plan_to_json(plan))


def load_plan(path) -> FoldPlan:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    return FoldPlan(
        k=payload["k"], seed=payload["seed"], unit=payload["unit"],
        folds=tuple(tuple(fold) for fold in payload["folds"]),
    )

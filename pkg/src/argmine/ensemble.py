"""Minority-vote ensemble: any parent calling the minority class wins."""

from __future__ import annotations

from .metrics import PredictionRecord, check_aligned

MAJORITY = "pro"


def or_rule_ensemble(a, b, minority: str = "opp") -> list[PredictionRecord]:
    """Merge two aligned prediction sets with the minority-OR rule.

    The merged score is the fraction of parents predicting the minority
    class (parents' native scores live on different scales); provenance
    names both parents.
    """
    check_aligned(a, b)
    b_by_id = {r.adu_id: r for r in b}
    model_a = a[0].model if a else ""
    model_b = b[0].model if b else ""
    merged_model = f"or({model_a},{model_b})"
    out = []
    for ra in a:
        rb = b_by_id[ra.adu_id]
        votes = (ra.pred == minority) + (rb.pred == minority)
        pred = minority if votes else MAJORITY
        out.append(PredictionRecord(
            adu_id=ra.adu_id, gold=ra.gold, pred=pred, score=votes / 2.0,
            model=merged_model, fold=ra.fold, run=ra.run,
        ))
    return out

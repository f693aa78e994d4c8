"""Hyperparameter selection by stratified inner cross-validation.

Each grid point is scored by the mean macro-F1 over inner folds built
from the training data alone; the argmax wins and ties keep the earlier
grid point.
"""

from __future__ import annotations

import numpy as np

from .folds import stratified_fold_indices
from .learners import derive_seed, train_model
from .models import encode_labels, predict


def macro_f1_01(gold01, pred01) -> float:
    """Two-class macro F1 over 0/1 arrays (0/0 divisions count as 0)."""
    gold01 = np.asarray(gold01)
    pred01 = np.asarray(pred01)
    f1s = []
    for cls in (0, 1):
        tp = int(((pred01 == cls) & (gold01 == cls)).sum())
        fp = int(((pred01 == cls) & (gold01 != cls)).sum())
        fn = int(((pred01 != cls) & (gold01 == cls)).sum())
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f1s.append(2 * p * r / (p + r) if p + r else 0.0)
    return sum(f1s) / 2.0


def grid_search(train_X, train_y, grid, kind: str, inner_k: int = 3,
                seed: int = 0) -> dict:
    """Best grid point for ``kind`` under stratified inner_k-fold CV.

    Deterministic given (grid order, seed); single-point grids are
    returned without training anything.
    """
    grid = list(grid)
    if not grid:
        raise ValueError("empty hyperparameter grid")
    if len(grid) == 1:
        return grid[0]

    y01 = encode_labels(train_y)
    folds = stratified_fold_indices(y01, inner_k, seed)
    all_idx = np.arange(len(y01))

    best_params, best_score = None, -1.0
    for gi, params in enumerate(grid):
        scores = []
        for fi, test_idx in enumerate(folds):
            train_idx = np.setdiff1d(all_idx, test_idx)
            model = train_model(kind, train_X[train_idx], y01[train_idx],
                                params, derive_seed(seed, gi, fi))
            labels, _ = predict(model, train_X[test_idx])
            pred01 = (labels == "opp").astype(np.int8)
            scores.append(macro_f1_01(y01[test_idx], pred01))
        score = float(np.mean(scores))
        if score > best_score:
            best_params, best_score = params, score
    return best_params

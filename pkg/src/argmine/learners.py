"""Single entry point for training any of the three classifiers."""

from __future__ import annotations

import numpy as np

from .gbt import train_gbt
from .svm import train_svm
from .trees import train_bagging

# hyperparameter search spaces; bagging and gbt ranges follow the
# experiment protocol, svm's C was never specified and defaults to 1
DEFAULT_GRIDS = {
    "svm": ({"C": 1.0},),
    "bagging": tuple({"n_trees": n} for n in (50, 100, 200, 500)),
    "gbt": tuple({"n_trees": 150, "max_depth": d} for d in (2, 8, 20, 30)),
}


def train_model(kind: str, X, y, params: dict, seed: int):
    if kind == "svm":
        return train_svm(X, y, C=params.get("C", 1.0), seed=seed)
    if kind == "bagging":
        return train_bagging(
            X, y,
            n_trees=params.get("n_trees", 100),
            seed=seed,
            max_depth=params.get("max_depth"),
            bootstrap=params.get("bootstrap", True),
        )
    if kind == "gbt":
        return train_gbt(
            X, y,
            n_trees=params.get("n_trees", 150),
            max_depth=params.get("max_depth", 8),
            learning_rate=params.get("learning_rate", 0.3),
            l2_lambda=params.get("l2_lambda", 1.0),
            seed=seed,
        )
    raise ValueError(f"unknown model kind {kind!r}")


def derive_seed(*parts) -> int:
    """Stable child seed from (seed, unit indices); independent of call order."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])

"""Second-order boosted regression trees on logistic loss.

Per round, with p = sigmoid(score) and y in {0, 1}: gradient g = p - y,
hessian h = p(1 - p); a leaf is worth -sum(g) / (sum(h) + l2_lambda) and
the split score is GL^2/(HL+l) + GR^2/(HR+l) - G^2/(H+l) (halved when
reported).  Zero-gain splits are accepted: at saddle points such as the
XOR root every first split has exactly zero gain, yet the children are
separable, and with l2_lambda > 0 a gradient-uniform node always scores
negative, so nothing useless is split.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .models import TrainedModel, Tree, as_csr, encode_labels
from .trees import _TreeBuilder

DEFAULT_N_TREES = 150
DEFAULT_LEARNING_RATE = 0.3
DEFAULT_L2_LAMBDA = 1.0


def sigmoid(s):
    return 1.0 / (1.0 + np.exp(-s))


def logistic_loss(y01, score) -> float:
    """Mean of log(1 + exp(s)) - y*s, evaluated stably."""
    s = np.asarray(score, dtype=np.float64)
    y = np.asarray(y01, dtype=np.float64)
    return float(np.mean(np.logaddexp(0.0, s) - y * s))


def grad_hess(y01, score) -> tuple[np.ndarray, np.ndarray]:
    p = sigmoid(np.asarray(score, dtype=np.float64))
    g = p - np.asarray(y01, dtype=np.float64)
    h = p * (1.0 - p)
    return g, h


def train_gbt(X, y, n_trees: int = DEFAULT_N_TREES, max_depth: int = 8,
              learning_rate: float = DEFAULT_LEARNING_RATE,
              l2_lambda: float = DEFAULT_L2_LAMBDA, seed: int = 0) -> TrainedModel:
    """Boost n_trees regression trees; deterministic (exact greedy, no subsampling).

    Leaf values are stored with the learning rate already applied, so a
    prediction is base_score plus the plain sum of leaf payloads.
    """
    M = as_csr(X)
    y01 = encode_labels(y).astype(np.float64)
    n = M.shape[0]
    builder = _TreeBuilder(M)
    base_score = 0.0
    score = np.full(n, base_score)
    trees = []
    for _ in range(n_trees):
        g, h = grad_hess(y01, score)
        node_of = np.zeros(n, dtype=np.int64)
        (feat, thr, left, right), node_g, node_h, node_of = builder.grow(
            node_of, g, h, _kernels.CRIT_NEWTON, l2_lambda, max_depth
        )
        denom = np.maximum(node_h + l2_lambda, 1e-12)
        value = np.where(feat < 0, learning_rate * (-node_g / denom), 0.0)
        trees.append(Tree(feat, thr, left, right, value))
        score = score + value[node_of]
    return TrainedModel(
        kind="gbt", dim=M.shape[1],
        hyperparams={"n_trees": n_trees, "max_depth": max_depth,
                     "learning_rate": learning_rate, "l2_lambda": l2_lambda,
                     "seed": seed},
        trees=tuple(trees),
        base_score=base_score,
    )

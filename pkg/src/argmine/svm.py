"""Linear SVM trained by epoch-based stochastic subgradient descent.

Minimizes 0.5*||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)) using
1/(lambda*t) step sizes with lambda = 1/(C*n), a seeded per-epoch
shuffle, and suffix averaging of epoch-end iterates (the running average
restarts at power-of-two epochs, so the returned model averages at least
the last half of the run).  Stops when the relative objective change
between epochs falls below 1e-4, or after 200 epochs.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .models import TrainedModel, as_csr, encode_labels

MAX_EPOCHS = 200
OBJECTIVE_RTOL = 1e-4
DEFAULT_C = 1.0


def svm_objective(X, y, w, b, C: float) -> float:
    M = as_csr(X)
    y_signed = np.where(encode_labels(y) == 1, 1.0, -1.0)
    row_ptr, row_idx, row_val = M.indptr.astype(np.int64), M.indices.astype(np.int64), M.data
    hinge = _kernels.hinge_sum(row_ptr, row_idx, row_val, y_signed, w, float(b))
    return 0.5 * float(w @ w) + C * hinge


def train_svm(X, y, C: float = DEFAULT_C, seed: int = 0) -> TrainedModel:
    M = as_csr(X)
    y01 = encode_labels(y)
    y_signed = np.where(y01 == 1, 1.0, -1.0)
    n, d = M.shape
    lam = 1.0 / (C * n)
    row_ptr, row_idx, row_val = M.indptr.astype(np.int64), M.indices.astype(np.int64), M.data

    rng = np.random.default_rng([seed, 0])
    w = np.zeros(d)
    b = 0.0
    t = 0
    w_sum = np.zeros(d)
    b_sum = 0.0
    n_summed = 0
    prev_obj = None
    best = (w.copy(), 0.0)

    for epoch in range(1, MAX_EPOCHS + 1):
        order = rng.permutation(n).astype(np.int64)
        b, t = _kernels.svm_epoch(row_ptr, row_idx, row_val, y_signed, order,
                                  w, lam, t, b)
        if epoch & (epoch - 1) == 0:  # power of two: restart the suffix average
            w_sum[:] = 0.0
            b_sum = 0.0
            n_summed = 0
        w_sum += w
        b_sum += b
        n_summed += 1
        w_avg = w_sum / n_summed
        b_avg = b_sum / n_summed
        hinge = _kernels.hinge_sum(row_ptr, row_idx, row_val, y_signed, w_avg, b_avg)
        obj = 0.5 * float(w_avg @ w_avg) + C * hinge
        best = (w_avg, b_avg)
        if prev_obj is not None and abs(prev_obj - obj) <= OBJECTIVE_RTOL * max(prev_obj, 1e-12):
            break
        prev_obj = obj

    return TrainedModel(
        kind="svm", dim=d,
        hyperparams={"C": C, "seed": seed},
        weights=best[0], bias=float(best[1]),
    )

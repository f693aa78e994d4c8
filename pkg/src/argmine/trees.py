"""CART decision trees and bootstrap-aggregated ensembles.

Split search is exact greedy over Gini impurity decrease.  Splits with
zero decrease are accepted (pure nodes never reach the search, so this
only lets trees escape plateaus such as the XOR root, where every single
split is uninformative but the children become separable).
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .models import TrainedModel, Tree, as_csr, encode_labels

_UNBOUNDED = 1 << 30


class _TreeBuilder:
    """Level-wise growth over a value-sorted CSC view, shared by all tree learners."""

    def __init__(self, M):
        self.M = M
        self.row_ptr = M.indptr.astype(np.int64)
        self.row_idx = M.indices.astype(np.int64)
        self.row_val = M.data
        csc = M.tocsc()
        csc.sort_indices()
        col_of = np.repeat(np.arange(M.shape[1], dtype=np.int64), np.diff(csc.indptr))
        order = np.lexsort((csc.data, col_of))
        self.col_ptr = csc.indptr.astype(np.int64)
        self.sorted_rows = csc.indices.astype(np.int64)[order]
        self.sorted_vals = csc.data[order]

    def grow(self, node_of, g, h, crit, lam, max_depth):
        """Returns (tree arrays sans leaf values, node_g, node_h, node_cnt, final node_of)."""
        included = node_of >= 0
        node_g = [float(g[included].sum())]
        node_h = [float(h[included].sum())]
        node_cnt = [int(included.sum())]
        feat, thr, left, right = [-1], [0.0], [-1], [-1]
        frontier = [0]
        depth = 0
        limit = _UNBOUNDED if max_depth is None else max_depth

        while frontier and depth < limit:
            n_nodes = len(feat)
            active = np.zeros(n_nodes, dtype=np.bool_)
            for u in frontier:
                if node_cnt[u] < 2:
                    continue
                if crit == _kernels.CRIT_GINI and not (0.0 < node_g[u] < node_h[u]):
                    continue  # class-pure node
                active[u] = True
            if not active.any():
                break

            best_gain = np.full(n_nodes, -np.inf)
            best_feat = np.full(n_nodes, -1, dtype=np.int64)
            best_thr = np.zeros(n_nodes)
            _kernels.best_splits_level(
                self.col_ptr, self.sorted_rows, self.sorted_vals,
                node_of, active, g, h,
                np.asarray(node_g), np.asarray(node_h),
                np.asarray(node_cnt, dtype=np.int64),
                lam, crit, best_gain, best_feat, best_thr,
            )

            children = []
            for u in frontier:
                if active[u] and best_feat[u] >= 0 and best_gain[u] >= 0.0:
                    feat[u] = int(best_feat[u])
                    thr[u] = float(best_thr[u])
                    left[u] = len(feat)
                    right[u] = len(feat) + 1
                    children.extend((len(feat), len(feat) + 1))
                    for _ in range(2):
                        feat.append(-1)
                        thr.append(0.0)
                        left.append(-1)
                        right.append(-1)
                        node_g.append(0.0)
                        node_h.append(0.0)
                        node_cnt.append(0)
            if not children:
                break

            total = len(feat)
            child_g = np.zeros(total)
            child_h = np.zeros(total)
            child_cnt = np.zeros(total, dtype=np.int64)
            _kernels.apply_splits(
                self.row_ptr, self.row_idx, self.row_val, node_of,
                np.asarray(feat, dtype=np.int64), np.asarray(thr),
                np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64),
                g, h, child_g, child_h, child_cnt,
            )
            for c in children:
                node_g[c] = float(child_g[c])
                node_h[c] = float(child_h[c])
                node_cnt[c] = int(child_cnt[c])
            frontier = children
            depth += 1

        arrays = (
            np.asarray(feat, dtype=np.int32),
            np.asarray(thr, dtype=np.float64),
            np.asarray(left, dtype=np.int32),
            np.asarray(right, dtype=np.int32),
        )
        return arrays, np.asarray(node_g), np.asarray(node_h), node_of


def _gini_tree(builder: _TreeBuilder, weights, y01, max_depth) -> Tree:
    """One CART tree; ``weights`` are per-row multiplicities (0 excludes)."""
    node_of = np.where(weights > 0, 0, -1).astype(np.int64)
    g = weights * (y01 == 1)
    h = weights.astype(np.float64)
    (feat, thr, left, right), node_g, node_h, _ = builder.grow(
        node_of, g, h, _kernels.CRIT_GINI, 0.0, max_depth
    )
    # leaf payload: majority class (weighted), ties to pro (0)
    value = np.where(2.0 * node_g > node_h, 1.0, 0.0)
    return Tree(feat, thr, left, right, value)


def train_cart(X, y, seed: int = 0, max_depth=None) -> TrainedModel:
    """A single unbagged CART tree (also the n_trees=1, no-bootstrap oracle)."""
    M = as_csr(X)
    y01 = encode_labels(y)
    builder = _TreeBuilder(M)
    tree = _gini_tree(builder, np.ones(M.shape[0]), y01, max_depth)
    return TrainedModel(
        kind="bagging", dim=M.shape[1],
        hyperparams={"n_trees": 1, "max_depth": max_depth, "bootstrap": False, "seed": seed},
        trees=(tree,),
    )


def train_bagging(X, y, n_trees: int, seed: int, max_depth=None,
                  bootstrap: bool = True) -> TrainedModel:
    """Majority vote over n_trees CART trees grown on bootstrap resamples.

    Tree t draws its resample from a generator seeded with (seed, t), so
    trees are independent of training order and parallel scheduling.
    """
    M = as_csr(X)
    y01 = encode_labels(y)
    n = M.shape[0]
    builder = _TreeBuilder(M)
    trees = []
    for t in range(n_trees):
        if bootstrap:
            rng = np.random.default_rng([seed, t])
            weights = np.bincount(rng.integers(0, n, size=n), minlength=n).astype(np.float64)
        else:
            weights = np.ones(n)
        trees.append(_gini_tree(builder, weights, y01, max_depth))
    return TrainedModel(
        kind="bagging", dim=M.shape[1],
        hyperparams={"n_trees": n_trees, "max_depth": max_depth,
                     "bootstrap": bootstrap, "seed": seed},
        trees=tuple(trees),
    )

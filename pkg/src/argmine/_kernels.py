"""Compiled inner loops for the tree and SVM learners.

Trees are grown level-wise over a value-sorted CSC view of the data so
that one pass per column scores every candidate threshold of every node
on the level, including the implicit block of zero entries.  All loops
are sequential, so results are bitwise reproducible.
"""

import numpy as np
from numba import njit

NEG_INF = -np.inf

# gain criteria
CRIT_NEWTON = 0  # second-order boosting gain
CRIT_GINI = 1    # weighted Gini impurity decrease


@njit(cache=True)
def _gain(crit, gl, hl, gr, hr, g, h, lam):
    if crit == CRIT_NEWTON:
        dl = hl + lam
        dr = hr + lam
        dp = h + lam
        if dl < 1e-12:
            dl = 1e-12
        if dr < 1e-12:
            dr = 1e-12
        if dp < 1e-12:
            dp = 1e-12
        return gl * gl / dl + gr * gr / dr + -(g * g) / dp
    # weighted Gini decrease; g holds class-1 weight, h total weight
    if hl <= 0.0 or hr <= 0.0 or h <= 0.0:
        return NEG_INF
    parent = h - (g * g + (h - g) * (h - g)) / h
    left = hl - (gl * gl + (hl - gl) * (hl - gl)) / hl
    right = hr - (gr * gr + (hr - gr) * (hr - gr)) / hr
    return parent - left - right


@njit(cache=True)
def best_splits_level(col_ptr, sorted_rows, sorted_vals, node_of, active,
                      g, h, node_g, node_h, node_cnt, lam, crit,
                      best_gain, best_feat, best_thr):
    """Fill best_gain/best_feat/best_thr for every active node.

    Entries of each column must be sorted ascending by value.  Candidate
    thresholds are midpoints between consecutive distinct values, with
    the zero block (rows absent from the column) spliced in at its sorted
    position.  Ties keep the first candidate in (column, threshold) order.
    """
    n_nodes = node_g.shape[0]
    d = col_ptr.shape[0] - 1

    stamp_a = np.full(n_nodes, -1, dtype=np.int64)
    nnz_g = np.zeros(n_nodes, dtype=np.float64)
    nnz_h = np.zeros(n_nodes, dtype=np.float64)
    nnz_c = np.zeros(n_nodes, dtype=np.int64)

    stamp_b = np.full(n_nodes, -1, dtype=np.int64)
    acc_g = np.zeros(n_nodes, dtype=np.float64)
    acc_h = np.zeros(n_nodes, dtype=np.float64)
    acc_c = np.zeros(n_nodes, dtype=np.int64)
    last_val = np.zeros(n_nodes, dtype=np.float64)
    has_last = np.zeros(n_nodes, dtype=np.uint8)
    zero_done = np.zeros(n_nodes, dtype=np.uint8)
    touched = np.empty(n_nodes, dtype=np.int64)

    for j in range(d):
        lo = col_ptr[j]
        hi = col_ptr[j + 1]
        if hi == lo:
            continue

        for k in range(lo, hi):
            u = node_of[sorted_rows[k]]
            if u < 0 or not active[u]:
                continue
            if stamp_a[u] != j:
                stamp_a[u] = j
                nnz_g[u] = 0.0
                nnz_h[u] = 0.0
                nnz_c[u] = 0
            r = sorted_rows[k]
            nnz_g[u] += g[r]
            nnz_h[u] += h[r]
            nnz_c[u] += 1

        n_touched = 0
        for k in range(lo, hi):
            r = sorted_rows[k]
            u = node_of[r]
            if u < 0 or not active[u]:
                continue
            v = sorted_vals[k]
            if stamp_b[u] != j:
                stamp_b[u] = j
                acc_g[u] = 0.0
                acc_h[u] = 0.0
                acc_c[u] = 0
                has_last[u] = 0
                zero_done[u] = 1 if node_cnt[u] == nnz_c[u] else 0
                touched[n_touched] = u
                n_touched += 1

            if zero_done[u] == 0 and v > 0.0:
                # splice the zero block in before this entry
                if acc_c[u] > 0 and has_last[u] == 1:
                    _consider(crit, u, j, (last_val[u] + 0.0) / 2.0,
                              acc_g[u], acc_h[u], acc_c[u],
                              node_g, node_h, node_cnt, lam,
                              best_gain, best_feat, best_thr)
                acc_g[u] += node_g[u] - nnz_g[u]
                acc_h[u] += node_h[u] - nnz_h[u]
                acc_c[u] += node_cnt[u] - nnz_c[u]
                last_val[u] = 0.0
                has_last[u] = 1
                zero_done[u] = 1

            if has_last[u] == 1 and v > last_val[u] and acc_c[u] > 0:
                _consider(crit, u, j, (last_val[u] + v) / 2.0,
                          acc_g[u], acc_h[u], acc_c[u],
                          node_g, node_h, node_cnt, lam,
                          best_gain, best_feat, best_thr)

            acc_g[u] += g[r]
            acc_h[u] += h[r]
            acc_c[u] += 1
            last_val[u] = v
            has_last[u] = 1

        # nodes whose zero block comes after every stored entry
        for t in range(n_touched):
            u = touched[t]
            if zero_done[u] == 0 and acc_c[u] > 0:
                _consider(crit, u, j, (last_val[u] + 0.0) / 2.0,
                          acc_g[u], acc_h[u], acc_c[u],
                          node_g, node_h, node_cnt, lam,
                          best_gain, best_feat, best_thr)


@njit(cache=True)
def _consider(crit, u, feat, thr, gl, hl, cl, node_g, node_h, node_cnt, lam,
              best_gain, best_feat, best_thr):
    cr = node_cnt[u] - cl
    if cl < 1 or cr < 1:
        return
    gain = _gain(crit, gl, hl, node_g[u] - gl, node_h[u] - hl,
                 node_g[u], node_h[u], lam)
    if gain > best_gain[u]:
        best_gain[u] = gain
        best_feat[u] = feat
        best_thr[u] = thr


@njit(cache=True)
def _row_value(row_ptr, row_idx, row_val, i, feature):
    lo = row_ptr[i]
    hi = row_ptr[i + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        f = row_idx[mid]
        if f == feature:
            return row_val[mid]
        if f < feature:
            lo = mid + 1
        else:
            hi = mid
    return 0.0


@njit(cache=True)
def apply_splits(row_ptr, row_idx, row_val, node_of, feat_arr, thr_arr,
                 left_arr, right_arr, g, h, child_g, child_h, child_cnt):
    """Move rows of split nodes into their children, accumulating child stats."""
    for i in range(node_of.shape[0]):
        u = node_of[i]
        if u < 0:
            continue
        f = feat_arr[u]
        if f < 0:
            continue
        x = _row_value(row_ptr, row_idx, row_val, i, f)
        c = left_arr[u] if x < thr_arr[u] else right_arr[u]
        node_of[i] = c
        child_g[c] += g[i]
        child_h[c] += h[i]
        child_cnt[c] += 1


@njit(cache=True)
def tree_accumulate(row_ptr, row_idx, row_val, n_rows, feat, thr, left, right,
                    value, out):
    """Add each row's leaf value to out (shared by boosting and vote counting)."""
    for i in range(n_rows):
        node = 0
        while feat[node] >= 0:
            x = _row_value(row_ptr, row_idx, row_val, i, feat[node])
            node = left[node] if x < thr[node] else right[node]
        out[i] += value[node]


@njit(cache=True)
def svm_epoch(row_ptr, row_idx, row_val, y_signed, order, w, lam, t_start, b_in):
    """One pass of the stochastic subgradient method with 1/(lam*t) steps.

    The weight decay is applied explicitly so the iterate stays an exact
    function of the visiting order.  Returns the updated bias and step
    counter.
    """
    b = b_in
    t = t_start
    for oi in range(order.shape[0]):
        i = order[oi]
        t += 1
        eta = 1.0 / (lam * t)
        s = b
        for k in range(row_ptr[i], row_ptr[i + 1]):
            s += w[row_idx[k]] * row_val[k]
        margin = y_signed[i] * s
        w *= 1.0 - 1.0 / t
        if margin < 1.0:
            scale = eta * y_signed[i]
            for k in range(row_ptr[i], row_ptr[i + 1]):
                w[row_idx[k]] += scale * row_val[k]
            b += scale
    return b, t


@njit(cache=True)
def hinge_sum(row_ptr, row_idx, row_val, y_signed, w, b):
    total = 0.0
    for i in range(row_ptr.shape[0] - 1):
        s = b
        for k in range(row_ptr[i], row_ptr[i + 1]):
            s += w[row_idx[k]] * row_val[k]
        loss = 1.0 - y_signed[i] * s
        if loss > 0.0:
            total += loss
    return total

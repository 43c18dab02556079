"""Pure-numpy tree kernels, the fallback when the JIT backend is off.

Arithmetic is arranged to match `_numba` bit for bit: stable sorts,
cumulative sums for every aggregate, and the same split-score
expression, so the two backends are interchangeable.
"""

import numpy as np


def grow(X, y, min_samples_split, min_samples_leaf, max_depth):
    n, m = X.shape
    cap = 2 * n
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap, np.float64)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap, np.float64)
    count = np.zeros(cap, np.int64)

    order = np.arange(n)
    stack = [(0, 0, n, 0)]
    n_nodes = 1

    while stack:
        node, lo, hi, depth = stack.pop()
        size = hi - lo
        seg = order[lo:hi]
        yseg = y[seg]

        value[node] = np.cumsum(yseg)[-1] / size
        count[node] = size

        if size < min_samples_split:
            continue
        if max_depth >= 0 and depth >= max_depth:
            continue
        if np.all(yseg == yseg[0]):
            continue

        best_score = np.inf
        best_f = -1
        best_t = 0.0
        best_k = -1

        ks = np.arange(1, size, dtype=np.float64)
        for f in range(m):
            xs = X[seg, f]
            idx = np.argsort(xs, kind="stable")
            xs_s = xs[idx]
            valid = xs_s[:-1] != xs_s[1:]
            if min_samples_leaf > 1:
                valid &= (ks >= min_samples_leaf) & (size - ks >= min_samples_leaf)
            if not valid.any():
                continue
            ys_s = yseg[idx]
            cy = np.cumsum(ys_s)
            cy2 = np.cumsum(ys_s * ys_s)
            sl = cy[:-1]
            sl2 = cy2[:-1]
            sr = cy[-1] - sl
            sr2 = cy2[-1] - sl2
            score = (sl2 - sl * sl / ks) + (sr2 - sr * sr / (size - ks))
            score[~valid] = np.inf
            j = int(np.argmin(score))
            if score[j] < best_score:
                best_score = float(score[j])
                best_f = f
                best_t = (xs_s[j] + xs_s[j + 1]) / 2.0
                best_k = j + 1

        if best_f < 0:
            continue

        mask = X[seg, best_f] <= best_t
        order[lo:hi] = np.concatenate((seg[mask], seg[~mask]))

        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        feature[node] = best_f
        threshold[node] = best_t
        left[node] = lchild
        right[node] = rchild

        stack.append((rchild, lo + best_k, hi, depth + 1))
        stack.append((lchild, lo, lo + best_k, depth + 1))

    return feature, threshold, left, right, value, count, n_nodes


def predict(feature, threshold, left, right, value, X):
    n = X.shape[0]
    out = np.empty(n, np.float64)
    # route whole row batches level by level instead of one walk per row
    stack = [(0, np.arange(n))]
    while stack:
        node, rows = stack.pop()
        f = feature[node]
        if f < 0:
            out[rows] = value[node]
            continue
        goes_left = X[rows, f] <= threshold[node]
        stack.append((left[node], rows[goes_left]))
        stack.append((right[node], rows[~goes_left]))
    return out

"""JIT-compiled tree kernels.

Mirrors `_numpy` operation for operation: sums are accumulated
sequentially in the exact order `np.cumsum` uses, and sorts are stable,
so both backends produce bit-identical trees on the same input.
"""

import numpy as np
from numba import njit


@njit(cache=True)
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
    scratch = np.empty(n, np.int64)

    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_depth = np.empty(cap, np.int64)
    stack_node[0] = 0
    stack_lo[0] = 0
    stack_hi[0] = n
    stack_depth[0] = 0
    sp = 1
    n_nodes = 1

    xs = np.empty(n, np.float64)
    ys = np.empty(n, np.float64)

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        lo = stack_lo[sp]
        hi = stack_hi[sp]
        depth = stack_depth[sp]
        size = hi - lo

        # seed with the first element, like cumsum, so a -0.0 target
        # keeps its sign bit and both backends agree exactly
        s = y[order[lo]]
        for i in range(lo + 1, hi):
            s += y[order[i]]
        value[node] = s / size
        count[node] = size

        if size < min_samples_split:
            continue
        if max_depth >= 0 and depth >= max_depth:
            continue
        y0 = y[order[lo]]
        all_equal = True
        for i in range(lo + 1, hi):
            if y[order[i]] != y0:
                all_equal = False
                break
        if all_equal:
            continue

        best_score = np.inf
        best_f = -1
        best_t = 0.0
        best_k = -1

        for f in range(m):
            for i in range(size):
                xs[i] = X[order[lo + i], f]
            idx = np.argsort(xs[:size], kind="mergesort")
            for i in range(size):
                ys[i] = y[order[lo + idx[i]]]
            ty = ys[0]
            ty2 = ys[0] * ys[0]
            for i in range(1, size):
                ty += ys[i]
                ty2 += ys[i] * ys[i]
            cy = ys[0]
            cy2 = ys[0] * ys[0]
            for k in range(1, size):
                if k > 1:
                    v = ys[k - 1]
                    cy += v
                    cy2 += v * v
                if xs[idx[k - 1]] == xs[idx[k]]:
                    continue
                if k < min_samples_leaf or size - k < min_samples_leaf:
                    continue
                sl = cy
                sl2 = cy2
                sr = ty - cy
                sr2 = ty2 - cy2
                score = (sl2 - sl * sl / k) + (sr2 - sr * sr / (size - k))
                if score < best_score:
                    best_score = score
                    best_f = f
                    best_t = (xs[idx[k - 1]] + xs[idx[k]]) / 2.0
                    best_k = k

        if best_f < 0:
            continue

        # stable partition by the chosen split, preserving segment order
        nl = 0
        nr = 0
        for i in range(lo, hi):
            row = order[i]
            if X[row, best_f] <= best_t:
                scratch[lo + nl] = row
                nl += 1
            else:
                scratch[hi - (size - best_k) + nr] = row
                nr += 1
        for i in range(lo, hi):
            order[i] = scratch[i]

        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        feature[node] = best_f
        threshold[node] = best_t
        left[node] = lchild
        right[node] = rchild

        stack_node[sp] = rchild
        stack_lo[sp] = lo + best_k
        stack_hi[sp] = hi
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = lchild
        stack_lo[sp] = lo
        stack_hi[sp] = lo + best_k
        stack_depth[sp] = depth + 1
        sp += 1

    return feature, threshold, left, right, value, count, n_nodes


@njit(cache=True)
def predict(feature, threshold, left, right, value, X):
    n = X.shape[0]
    out = np.empty(n, np.float64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = value[node]
    return out

"""Regression trees for performance prediction.

Trees split on the feature/threshold pair that minimises the summed
squared error of the two sides.  Candidate thresholds are midpoints
between consecutive distinct sorted values; rows with value <= threshold
go left.  Ties prefer the lowest feature index, then the lowest
threshold.  Growth stops when a node is pure, smaller than
min_samples_split, at max_depth, or has no candidate leaving both sides
min_samples_leaf rows.

Training canonicalises row order first (rows sorted by features, then
target), so the learned tree does not depend on how the caller happened
to order the sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import backend_name, kernels

__all__ = ["RegressionTree", "train", "dump", "backend_name"]


@dataclass(frozen=True)
class RegressionTree:
    """Flat-array tree: node i is a leaf iff feature[i] < 0."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    count: np.ndarray
    n_features: int

    @property
    def n_nodes(self) -> int:
        return self.feature.shape[0]

    @property
    def n_leaves(self) -> int:
        return int((self.feature < 0).sum())

    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depths[self.left[node]] = depths[node] + 1
                depths[self.right[node]] = depths[node] + 1
        return int(depths.max())

    def predict(self, x):
        """Predict for one feature vector (returns float) or a matrix
        of row vectors (returns an array)."""
        arr = np.ascontiguousarray(x, dtype=np.float64)
        single = arr.ndim == 1
        if single:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2 or arr.shape[1] != self.n_features:
            raise ValueError(
                f"expected vectors of {self.n_features} features, "
                f"got shape {np.shape(x)}"
            )
        out = kernels().predict(
            self.feature, self.threshold, self.left, self.right,
            self.value, arr,
        )
        return float(out[0]) if single else out


def _canonical_order(X: np.ndarray, y: np.ndarray) -> np.ndarray:
    # lexsort's last key is primary: sort by feature 0, 1, ..., then y
    keys = (y,) + tuple(X[:, f] for f in range(X.shape[1] - 1, -1, -1))
    return np.lexsort(keys)


def train(
    features,
    targets,
    *,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
    max_depth: int | None = None,
) -> RegressionTree:
    X = np.ascontiguousarray(features, dtype=np.float64)
    y = np.ascontiguousarray(targets, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"features must be 2-D, got {X.ndim}-D")
    if y.ndim != 1:
        raise ValueError(f"targets must be 1-D, got {y.ndim}-D")
    if X.shape[0] != y.shape[0]:
        raise ValueError(
            f"{X.shape[0]} feature rows but {y.shape[0]} targets"
        )
    if X.shape[0] == 0:
        raise ValueError("cannot train on an empty sample")
    if not np.isfinite(X).all() or not np.isfinite(y).all():
        raise ValueError("training data must be finite")
    if min_samples_split < 2:
        raise ValueError("min_samples_split must be at least 2")
    if min_samples_leaf < 1:
        raise ValueError("min_samples_leaf must be at least 1")
    if max_depth is not None and max_depth < 0:
        raise ValueError("max_depth must be non-negative or None")

    ordering = _canonical_order(X, y)
    X = np.ascontiguousarray(X[ordering])
    y = np.ascontiguousarray(y[ordering])

    depth_cap = -1 if max_depth is None else int(max_depth)
    feature, threshold, left, right, value, count, n_nodes = kernels().grow(
        X, y, int(min_samples_split), int(min_samples_leaf), depth_cap
    )

    def frozen(a):
        trimmed = a[:n_nodes].copy()
        trimmed.setflags(write=False)
        return trimmed

    return RegressionTree(
        feature=frozen(feature),
        threshold=frozen(threshold),
        left=frozen(left),
        right=frozen(right),
        value=frozen(value),
        count=frozen(count),
        n_features=X.shape[1],
    )


def dump(tree: RegressionTree) -> str:
    """Readable preorder rendering, two spaces of indent per level."""
    lines: list[str] = []

    def walk(node: int, depth: int) -> None:
        pad = "  " * depth
        f = int(tree.feature[node])
        if f < 0:
            mean = float(tree.value[node])
            lines.append(f"{pad}leaf {mean!r} (n={int(tree.count[node])})")
            return
        lines.append(f"{pad}feature {f} <= {float(tree.threshold[node])!r}")
        walk(int(tree.left[node]), depth + 1)
        walk(int(tree.right[node]), depth + 1)

    walk(0, 0)
    return "\n".join(lines) + "\n"

"""Accuracy and ranking measures used by the samplers and the harness.

Two tie conventions coexist deliberately: rank vectors for
mean_rank_difference break ties by list position (consistent with
dataset.true_ranks), while Spearman correlation uses average ranks,
the statistical convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from confrank.errors import UndefinedCorrelationError

__all__ = [
    "AccuracyTrace",
    "TracePoint",
    "correlation",
    "mean_rank_difference",
    "mmre",
    "positional_ranks",
    "rank_difference_of_optimum",
]


@dataclass(frozen=True)
class TracePoint:
    training_size: int
    score: float


@dataclass(frozen=True)
class AccuracyTrace:
    """Per-iteration (training size, score) observations of one sampler
    run.  measure_kind names what score means for this trace."""

    measure_kind: str
    points: tuple[TracePoint, ...]

    def __post_init__(self):
        if self.measure_kind not in (
            "mmre", "mean_rank_difference", "correlation"
        ):
            raise ValueError(f"unknown measure kind {self.measure_kind!r}")
        sizes = [p.training_size for p in self.points]
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("training sizes must be strictly increasing")

    def __len__(self) -> int:
        return len(self.points)

    def sizes(self) -> list[int]:
        return [p.training_size for p in self.points]

    def scores(self) -> list[float]:
        return [p.score for p in self.points]


def _pair(predicted, actual) -> tuple[np.ndarray, np.ndarray]:
    p = np.asarray(predicted, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if p.ndim != 1 or a.ndim != 1:
        raise ValueError("inputs must be one-dimensional")
    if p.shape[0] != a.shape[0]:
        raise ValueError(
            f"length mismatch: {p.shape[0]} predicted vs {a.shape[0]} actual"
        )
    return p, a


def mmre(predicted, actual) -> float:
    """Mean magnitude of relative error, in percent."""
    p, a = _pair(predicted, actual)
    if p.shape[0] == 0:
        raise ValueError("mmre needs at least one value")
    if np.any(a == 0.0):
        raise ZeroDivisionError(
            "actual values contain 0; relative error is undefined"
        )
    return float(np.mean(np.abs(p - a) / a) * 100.0)


def positional_ranks(values) -> np.ndarray:
    """Ascending ranks starting at 1, ties broken by list position."""
    v = np.asarray(values, dtype=np.float64)
    order = np.lexsort((np.arange(v.shape[0]), v))
    ranks = np.empty(v.shape[0], dtype=np.int64)
    ranks[order] = np.arange(1, v.shape[0] + 1)
    return ranks


def mean_rank_difference(predicted, actual) -> float:
    """Mean |rank(actual_i) - rank(predicted_i)| over the list."""
    p, a = _pair(predicted, actual)
    if p.shape[0] == 0:
        raise ValueError("mean_rank_difference needs at least one value")
    return float(
        np.mean(np.abs(positional_ranks(a) - positional_ranks(p)))
    )


def rank_difference_of_optimum(actual_ranks: dict, predicted_best) -> int:
    """How far the predicted optimum sits from true rank 1."""
    key = int(predicted_best)
    if key not in actual_ranks:
        raise ValueError(f"index {key} has no recorded rank")
    return int(actual_ranks[key]) - 1


def _pearson(p: np.ndarray, a: np.ndarray) -> float:
    dp = p - p.mean()
    da = a - a.mean()
    denom = np.sqrt(np.sum(dp * dp) * np.sum(da * da))
    if denom == 0.0:
        raise UndefinedCorrelationError(
            "zero variance on one side; correlation is undefined"
        )
    r = float(np.sum(dp * da) / denom)
    return min(1.0, max(-1.0, r))


def correlation(predicted, actual, kind: str = "spearman") -> float:
    p, a = _pair(predicted, actual)
    if p.shape[0] < 2:
        raise ValueError("correlation needs at least two values")
    if kind == "pearson":
        return _pearson(p, a)
    if kind == "spearman":
        return _pearson(rankdata(p), rankdata(a))
    raise ValueError(f"unknown correlation kind {kind!r}")

"""Iterative sampling strategies over a split configuration table.

All three strategies share one loop: draw configurations from the
shuffled training pool, look their performance up in the table, retrain
a regression tree on everything measured so far, and score the model on
the testing pool.  They differ in the score and in when they stop:

* progressive_sample scores by accuracy (100 - MMRE) and spends a life
  whenever accuracy fails to strictly improve on the previous iteration.
* rank_based_sample scores by mean rank difference and spends a life
  whenever it fails to strictly decrease.
* projective_sample runs until every feature has been seen both
  selected and deselected thresh_freq times, then fits a learning curve
  to its accuracy history and buys samples up front to reach the
  projected convergence budget.

Lives are cumulative: an improvement does not refund earlier losses
unless reset_lives is set.  Draws are without replacement by default;
with_replacement allows repeats but keeps the same total budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from confrank import cart, curvefit, metrics
from confrank.dataset import ConfigurationTable, PoolSplit
from confrank.errors import (
    NoFitError,
    UndefinedCorrelationError,
    UnsupportedFeatureError,
)

__all__ = [
    "FrequencyTable",
    "SamplerOutcome",
    "predict_optimum",
    "progressive_sample",
    "projective_sample",
    "rank_based_sample",
]


@dataclass(frozen=True)
class FrequencyTable:
    """Per-feature counts of how often value 1 (selected) and value 0
    (deselected) appeared among measured configurations."""

    selected: np.ndarray
    deselected: np.ndarray

    def minimum(self) -> int:
        return int(min(self.selected.min(), self.deselected.min()))


@dataclass(frozen=True)
class SamplerOutcome:
    model: cart.RegressionTree
    measured_indices: tuple[int, ...]
    trace: metrics.AccuracyTrace
    # spearman(predicted, actual) on the testing pool per iteration;
    # None where undefined (constant predictions)
    correlations: tuple
    termination: str
    frequency_table: FrequencyTable | None = None
    curve_fit: curvefit.LearningCurveFit | None = None

    @property
    def measurement_count(self) -> int:
        return len(self.measured_indices)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _safe_spearman(predicted, actual):
    try:
        return metrics.correlation(predicted, actual, "spearman")
    except (UndefinedCorrelationError, ValueError):
        return None


class _Drawer:
    """Yields training-pool row indices in a seeded order, batch_size at
    a time, never exceeding the pool size in total draws."""

    def __init__(self, split: PoolSplit, rng, with_replacement: bool):
        self.pool = split.training
        self.gen = _as_generator(rng)
        self.with_replacement = with_replacement
        if not with_replacement:
            self.order = self.gen.permutation(self.pool.shape[0])
        self.drawn = 0

    @property
    def budget(self) -> int:
        return int(self.pool.shape[0])

    @property
    def exhausted(self) -> bool:
        return self.drawn >= self.budget

    def take(self, k: int) -> list:
        k = min(k, self.budget - self.drawn)
        if self.with_replacement:
            pos = self.gen.integers(0, self.budget, size=k)
        else:
            pos = self.order[self.drawn:self.drawn + k]
        self.drawn += k
        return [int(self.pool[p]) for p in pos]


def _check_common(split: PoolSplit, table: ConfigurationTable,
                  batch_size: int) -> None:
    if split.training.size == 0:
        raise ValueError("training pool is empty")
    if split.testing.size == 0:
        raise ValueError("testing pool is empty; nothing to score against")
    if batch_size < 1:
        raise ValueError("batch_size must be at least 1")


def _lives_loop(
    split: PoolSplit,
    table: ConfigurationTable,
    lives: int,
    *,
    scorer,
    improved,
    initial_score: float,
    measure_kind: str,
    rng,
    batch_size: int,
    with_replacement: bool,
    reset_lives: bool,
    tree_params: dict | None,
) -> SamplerOutcome:
    if lives < 1:
        raise ValueError("lives must be at least 1")
    _check_common(split, table, batch_size)
    params = tree_params or {}
    drawer = _Drawer(split, rng, with_replacement)
    test_X = table.features[split.testing]
    test_y = table.performance[split.testing]

    measured: list[int] = []
    points: list[metrics.TracePoint] = []
    correlations: list = []
    lives_left = lives
    last_score = initial_score
    termination = "pool_exhausted"
    model = None

    while not drawer.exhausted:
        measured.extend(drawer.take(batch_size))
        model = cart.train(
            table.features[measured], table.performance[measured], **params
        )
        predicted = model.predict(test_X)
        score = scorer(predicted, test_y)
        points.append(metrics.TracePoint(len(measured), score))
        correlations.append(_safe_spearman(predicted, test_y))
        if improved(score, last_score):
            if reset_lives:
                lives_left = lives
        else:
            lives_left -= 1
        last_score = score
        if lives_left == 0:
            termination = "lives_exhausted"
            break

    return SamplerOutcome(
        model=model,
        measured_indices=tuple(measured),
        trace=metrics.AccuracyTrace(measure_kind, tuple(points)),
        correlations=tuple(correlations),
        termination=termination,
    )


def progressive_sample(
    split: PoolSplit,
    table: ConfigurationTable,
    lives: int = 3,
    *,
    rng=None,
    batch_size: int = 1,
    with_replacement: bool = False,
    reset_lives: bool = False,
    tree_params: dict | None = None,
) -> SamplerOutcome:
    """Stop once accuracy (100 - MMRE on the testing pool) has failed to
    strictly improve `lives` times."""
    return _lives_loop(
        split, table, lives,
        scorer=lambda p, a: 100.0 - metrics.mmre(p, a),
        improved=lambda score, last: score > last,
        # the first iteration only improves on a score below any real
        # accuracy, so a catastrophic first model can already cost a life
        initial_score=-1.0,
        measure_kind="mmre",
        rng=rng, batch_size=batch_size, with_replacement=with_replacement,
        reset_lives=reset_lives, tree_params=tree_params,
    )


def rank_based_sample(
    split: PoolSplit,
    table: ConfigurationTable,
    lives: int = 3,
    *,
    rng=None,
    batch_size: int = 1,
    with_replacement: bool = False,
    reset_lives: bool = False,
    tree_params: dict | None = None,
) -> SamplerOutcome:
    """Stop once the mean rank difference on the testing pool has failed
    to strictly decrease `lives` times."""
    return _lives_loop(
        split, table, lives,
        scorer=metrics.mean_rank_difference,
        improved=lambda score, last: score < last,
        # nothing beats the sentinel, so iteration 1 never costs a life
        initial_score=float("inf"),
        measure_kind="mean_rank_difference",
        rng=rng, batch_size=batch_size, with_replacement=with_replacement,
        reset_lives=reset_lives, tree_params=tree_params,
    )


def projective_sample(
    split: PoolSplit,
    table: ConfigurationTable,
    thresh_freq: int = 3,
    *,
    rng=None,
    batch_size: int = 1,
    with_replacement: bool = False,
    epsilon: float = 0.1,
    tree_params: dict | None = None,
) -> SamplerOutcome:
    """Sample until every feature was seen selected and deselected at
    least thresh_freq times, then project the accuracy learning curve
    and sample straight up to the projected convergence budget."""
    if thresh_freq < 1:
        raise ValueError("thresh_freq must be at least 1")
    if not table.is_binary():
        raise UnsupportedFeatureError(
            "the frequency heuristic needs all-binary features; use "
            "progressive or rank-based sampling for numeric options"
        )
    _check_common(split, table, batch_size)
    params = tree_params or {}
    drawer = _Drawer(split, rng, with_replacement)
    test_X = table.features[split.testing]
    test_y = table.performance[split.testing]

    m = table.n_features
    selected = np.zeros(m, dtype=np.int64)
    deselected = np.zeros(m, dtype=np.int64)

    measured: list[int] = []
    points: list[metrics.TracePoint] = []
    correlations: list = []
    model = None
    threshold_met = False

    def retrain_and_score():
        nonlocal model
        model = cart.train(
            table.features[measured], table.performance[measured], **params
        )
        predicted = model.predict(test_X)
        score = 100.0 - metrics.mmre(predicted, test_y)
        points.append(metrics.TracePoint(len(measured), score))
        correlations.append(_safe_spearman(predicted, test_y))
        return score

    while not drawer.exhausted:
        batch = drawer.take(batch_size)
        measured.extend(batch)
        for row in batch:
            ones = table.features[row] == 1.0
            selected[ones] += 1
            deselected[~ones] += 1
        retrain_and_score()
        if min(selected.min(), deselected.min()) >= thresh_freq:
            threshold_met = True
            break

    freq = FrequencyTable(
        selected=selected.copy(), deselected=deselected.copy()
    )
    fit = None
    termination = "pool_exhausted"
    if threshold_met:
        termination = "frequency_threshold"
        collector = [(p.training_size, p.score) for p in points]
        if len({n for n, _ in collector}) >= 3:
            try:
                fit = curvefit.best_fit(
                    collector, epsilon=epsilon, cap=drawer.budget
                )
            except NoFitError:
                fit = None
        if fit is not None and fit.projected_convergence > len(measured):
            # buy the remaining budget in one go; no further stop checks
            extra = drawer.take(fit.projected_convergence - len(measured))
            measured.extend(extra)
            for row in extra:
                ones = table.features[row] == 1.0
                selected[ones] += 1
                deselected[~ones] += 1
            freq = FrequencyTable(
                selected=selected.copy(), deselected=deselected.copy()
            )
            retrain_and_score()
            termination = "projected_budget_reached"

    return SamplerOutcome(
        model=model,
        measured_indices=tuple(measured),
        trace=metrics.AccuracyTrace("mmre", tuple(points)),
        correlations=tuple(correlations),
        termination=termination,
        frequency_table=freq,
        curve_fit=fit,
    )


def predict_optimum(outcome: SamplerOutcome, validation,
                    table: ConfigurationTable) -> int:
    """Row index the model considers best in the validation pool; ties
    go to the lowest row index."""
    idx = np.asarray(validation, dtype=np.int64)
    if idx.size == 0:
        raise ValueError("validation pool is empty")
    idx = np.sort(idx)
    predicted = outcome.model.predict(table.features[idx])
    return int(idx[int(np.argmin(predicted))])

"""Nonparametric machinery for comparing approaches.

Groups of treatments are ranked with a Scott-Knott style recursive
partition: split the median-sorted list where the between-group sum of
squares peaks, keep the split only when a bootstrap test says the
halves differ AND the effect size is not small, and give every
treatment inside an undivided group the same rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from confrank.seeding import stable_seed

__all__ = [
    "SkRankTable",
    "SkRow",
    "a12",
    "bootstrap_different",
    "iqr",
    "render_table",
    "scott_knott",
]


def a12(xs, ys) -> float:
    """Probability that a random x exceeds a random y, ties at half
    credit."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size == 0 or y.size == 0:
        raise ValueError("a12 needs non-empty samples on both sides")
    gt = np.sum(x[:, None] > y[None, :])
    eq = np.sum(x[:, None] == y[None, :])
    return float((gt + 0.5 * eq) / (x.size * y.size))


def _studentized(x: np.ndarray, y: np.ndarray) -> float:
    """|mean difference| scaled by its standard error; an exact zero
    spread with a real difference counts as infinitely extreme."""
    diff = abs(x.mean() - y.mean())
    se = np.sqrt(x.var(ddof=1) / x.size + y.var(ddof=1) / y.size)
    if se == 0.0:
        return 0.0 if diff == 0.0 else np.inf
    return diff / se


def bootstrap_different(xs, ys, iterations: int = 1000,
                        confidence: float = 0.95, seed=None) -> bool:
    """Two-sided bootstrap test of equal means: both samples are
    shifted onto the pooled mean, resampled separately, and the
    observed studentized difference is compared against the resampled
    distribution.  Studentizing (rather than using the raw mean
    difference) keeps the false-positive rate near the nominal level
    at the small sample sizes used here."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.size < 2 or y.size < 2:
        raise ValueError("bootstrap needs at least 2 values per sample")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must be in (0, 1)")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    observed = _studentized(x, y)
    pooled = np.concatenate((x, y)).mean()
    x_shift = x - x.mean() + pooled
    y_shift = y - y.mean() + pooled
    rng = np.random.default_rng(seed)
    hits = 0
    for _ in range(iterations):
        bx = rng.choice(x_shift, size=x.size, replace=True)
        by = rng.choice(y_shift, size=y.size, replace=True)
        if _studentized(bx, by) >= observed:
            hits += 1
    return hits / iterations < 1.0 - confidence


def iqr(samples) -> float:
    v = np.asarray(samples, dtype=np.float64)
    return float(np.percentile(v, 75) - np.percentile(v, 25))


@dataclass(frozen=True)
class SkRow:
    rank: int
    name: str
    median: float
    iqr: float
    samples: tuple


@dataclass(frozen=True)
class SkRankTable:
    rows: tuple

    def ranks(self) -> dict:
        return {row.name: row.rank for row in self.rows}


def _between_group_ss(groups: list[np.ndarray]) -> float:
    allv = np.concatenate(groups)
    mu = allv.mean()
    return float(sum(
        g.size * (g.mean() - mu) ** 2 for g in groups
    ))


def scott_knott(treatments: dict, seed=None) -> SkRankTable:
    if not treatments:
        raise ValueError("need at least one treatment")
    prepared = {}
    for name, samples in treatments.items():
        v = np.asarray(samples, dtype=np.float64)
        if v.size < 2:
            raise ValueError(
                f"treatment {name!r} needs at least 2 samples"
            )
        prepared[str(name)] = v
    # median-then-name order makes the result independent of dict order
    ordered = sorted(
        prepared.items(), key=lambda kv: (float(np.median(kv[1])), kv[0])
    )

    rank_of: dict = {}
    next_rank = [1]

    def assign(segment) -> None:
        for name, _ in segment:
            rank_of[name] = next_rank[0]
        next_rank[0] += 1

    def divide(segment, lo: int) -> None:
        if len(segment) == 1:
            assign(segment)
            return
        best_k = -1
        best_ss = -1.0
        for k in range(1, len(segment)):
            ss = _between_group_ss([
                np.concatenate([v for _, v in segment[:k]]),
                np.concatenate([v for _, v in segment[k:]]),
            ])
            if ss > best_ss:
                best_ss = ss
                best_k = k
        left = np.concatenate([v for _, v in segment[:best_k]])
        right = np.concatenate([v for _, v in segment[best_k:]])
        effect = a12(left, right)
        split = (
            max(effect, 1.0 - effect) >= 0.6
            and bootstrap_different(
                left, right, seed=stable_seed(seed, lo, lo + best_k, len(segment))
            )
        )
        if split:
            divide(segment[:best_k], lo)
            divide(segment[best_k:], lo + best_k)
        else:
            assign(segment)

    divide(ordered, 0)

    rows = tuple(
        SkRow(
            rank=rank_of[name],
            name=name,
            median=float(np.median(v)),
            iqr=iqr(v),
            samples=tuple(float(s) for s in v),
        )
        for name, v in ordered
    )
    return SkRankTable(rows=rows)


def render_table(table: SkRankTable, title: str = "") -> str:
    """Plain-text quartile table: rank, treatment, median, IQR."""
    name_w = max([len("treatment")] + [len(r.name) for r in table.rows])
    lines = []
    if title:
        lines.append(title)
    lines.append(f"rank  {'treatment'.ljust(name_w)}  {'median':>10}  {'iqr':>10}")
    for row in table.rows:
        lines.append(
            f"{row.rank:>4}  {row.name.ljust(name_w)}  "
            f"{row.median:>10.3f}  {row.iqr:>10.3f}"
        )
    return "\n".join(lines) + "\n"

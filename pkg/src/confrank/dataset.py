"""Configuration-performance tables: loading, splitting, and ground-truth ranks.

A table holds one row per measured configuration: the feature vector
(binary options encoded 0/1, numeric options as their literal value) and a
single performance value, where lower is always better. Tables are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .errors import (
    DuplicateRowError,
    NonFiniteValueError,
    ParseError,
    SchemaError,
)

__all__ = ["ConfigurationTable", "PoolSplit", "load_table", "to_csv", "split", "true_ranks"]


@dataclass(frozen=True)
class ConfigurationTable:
    """Rows of feature vectors plus one measured performance value per row.

    `features` is an (n_rows, n_features) float array; `performance` its
    (n_rows,) companion. Both are made read-only on construction.
    """

    feature_names: tuple[str, ...]
    features: np.ndarray
    performance: np.ndarray
    name: str = "table"

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        perf = np.ascontiguousarray(np.asarray(self.performance, dtype=np.float64))
        if feats.ndim != 2:
            raise ValueError("features must be a 2-D array")
        if perf.ndim != 1:
            raise ValueError("performance must be a 1-D array")
        if feats.shape[0] != perf.shape[0]:
            raise ValueError(
                f"row count mismatch: {feats.shape[0]} feature rows vs {perf.shape[0]} performance values"
            )
        if feats.shape[0] < 1:
            raise ValueError("a table needs at least one row")
        if feats.shape[1] != len(self.feature_names):
            raise ValueError(
                f"{len(self.feature_names)} feature names but {feats.shape[1]} feature columns"
            )
        if not np.all(np.isfinite(feats)):
            raise NonFiniteValueError(f"{self.name}: non-finite feature value")
        if not np.all(np.isfinite(perf)):
            raise NonFiniteValueError(f"{self.name}: non-finite performance value")
        _reject_duplicate_rows(feats, self.name)
        feats.flags.writeable = False
        perf.flags.writeable = False
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "performance", perf)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def is_binary(self) -> bool:
        """True when every feature value in the table is 0 or 1."""
        f = self.features
        return bool(np.all((f == 0.0) | (f == 1.0)))


@dataclass(frozen=True)
class PoolSplit:
    """Disjoint training/testing/validation row indices of one table."""

    training: np.ndarray
    testing: np.ndarray
    validation: np.ndarray
    seed: int

    def __post_init__(self):
        for attr in ("training", "testing", "validation"):
            arr = np.sort(np.asarray(getattr(self, attr), dtype=np.int64))
            arr.flags.writeable = False
            object.__setattr__(self, attr, arr)


def _reject_duplicate_rows(feats: np.ndarray, name: str) -> None:
    if feats.shape[0] < 2:
        return
    order = np.lexsort(feats.T[::-1])
    sorted_rows = feats[order]
    same = np.all(sorted_rows[1:] == sorted_rows[:-1], axis=1)
    if np.any(same):
        k = int(np.argmax(same))
        a, b = sorted((int(order[k]), int(order[k + 1])))
        raise DuplicateRowError(f"{name}: rows {a} and {b} have identical feature vectors")


def _open_text(source: str | Path | IO[bytes] | IO[str]) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8")


def load_table(
    source: str | Path | IO[bytes] | IO[str],
    perf_column: str | None = None,
    name: str | None = None,
    maximize: bool = False,
) -> ConfigurationTable:
    """Parse a CSV table: UTF-8, comma-separated, header row, no quoting.

    One column holds the performance value (default: the last column;
    override with `perf_column`). With `maximize=True` the performance
    column is negated at ingestion, so a throughput-style metric becomes
    a minimization objective and the rest of the library never branches
    on direction.
    """
    stream = _open_text(source)
    lines = [ln.rstrip("\n").rstrip("\r") for ln in stream]
    lines = [ln for ln in lines if ln.strip() != ""]
    if not lines:
        raise SchemaError("empty input: missing header row")
    header = [c.strip() for c in lines[0].split(",")]
    if any(h == "" for h in header) or len(set(header)) != len(header):
        raise SchemaError(f"malformed header: {lines[0]!r}")
    if perf_column is None:
        perf_column = header[-1]
    if perf_column not in header:
        raise SchemaError(f"performance column {perf_column!r} not in header {header}")
    perf_idx = header.index(perf_column)
    feature_names = [h for i, h in enumerate(header) if i != perf_idx]
    if not feature_names:
        raise SchemaError("table has no feature columns")

    n_cols = len(header)
    feats: list[list[float]] = []
    perf: list[float] = []
    for r, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != n_cols:
            raise SchemaError(f"row {r}: expected {n_cols} cells, found {len(cells)}")
        row_vals: list[float] = []
        for i, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(
                    f"row {r}, column {header[i]!r}: cannot parse {cell!r} as a number",
                    row=r,
                    column=header[i],
                ) from None
            row_vals.append(v)
        p = row_vals.pop(perf_idx)
        if not np.isfinite(p):
            raise NonFiniteValueError(f"row {r}: performance value {p} is not finite")
        feats.append(row_vals)
        perf.append(-p if maximize else p)

    if name is None:
        name = Path(source).stem if isinstance(source, (str, Path)) else "table"
    return ConfigurationTable(
        feature_names=tuple(feature_names),
        features=np.asarray(feats, dtype=np.float64),
        performance=np.asarray(perf, dtype=np.float64),
        name=name,
    )


def to_csv(table: ConfigurationTable, perf_column: str = "perf") -> str:
    """Serialize a table back to CSV text (round-trips through load_table)."""
    out = [",".join([*table.feature_names, perf_column])]
    for i in range(table.n_rows):
        cells = [repr(float(v)) for v in table.features[i]]
        cells.append(repr(float(table.performance[i])))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def split(
    table: ConfigurationTable,
    fractions: tuple[float, float, float],
    seed: int,
) -> PoolSplit:
    """Partition row indices into training/testing/validation pools.

    Shuffles the indices with a generator seeded by `seed`, then cuts by
    the requested fractions: the training pool gets floor(n * train), the
    testing pool floor(n * test), and the validation pool the remainder.
    Deterministic: the same table, fractions, and seed always yield the
    same pools.
    """
    tr, te, va = fractions
    if tr <= 0 or te <= 0 or va <= 0:
        raise ValueError(f"fractions must be positive, got {fractions}")
    if abs(tr + te + va - 1.0) > 1e-9:
        raise ValueError(f"fractions must sum to 1, got {fractions}")
    n = table.n_rows
    if n < 3:
        raise ValueError(f"need at least 3 rows to split, table has {n}")
    perm = np.random.default_rng(seed).permutation(n)
    n_train = int(np.floor(n * tr))
    n_test = int(np.floor(n * te))
    return PoolSplit(
        training=perm[:n_train],
        testing=perm[n_train : n_train + n_test],
        validation=perm[n_train + n_test :],
        seed=seed,
    )


def true_ranks(table: ConfigurationTable, indices: Iterable[int]) -> dict[int, int]:
    """Rank the given rows by performance: the least value gets rank 1.

    Ties are broken by ascending row index, so the result is always a
    bijection onto 1..N.
    """
    idx = np.asarray(sorted(int(i) for i in indices), dtype=np.int64)
    if idx.size == 0:
        raise ValueError("empty index set")
    if idx[0] < 0 or idx[-1] >= table.n_rows:
        raise ValueError("index out of range for table")
    if np.unique(idx).size != idx.size:
        raise ValueError("duplicate indices")
    order = np.lexsort((idx, table.performance[idx]))
    return {int(idx[o]): rank for rank, o in enumerate(order, start=1)}

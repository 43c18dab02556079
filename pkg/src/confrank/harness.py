"""Experiment orchestration: repeats, approaches, aggregation, reports.

Every cell (dataset, approach, repeat) derives its own RNG stream from
the master seed, so cells can run concurrently in any order — or alone
— and still reproduce the full run's numbers.  Aggregation folds over
cells in sorted order, which makes report bytes independent of --jobs.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from confrank import dataset, metrics, samplers, stats
from confrank.dataset import ConfigurationTable
from confrank.errors import DatasetError, UnsupportedFeatureError
from confrank.seeding import stable_rng, stable_seed

__all__ = [
    "APPROACHES",
    "CellResult",
    "ExperimentConfig",
    "ExperimentReport",
    "emit_outputs",
    "run_experiment",
    "spearman_growth",
    "sweep_lives",
]

APPROACHES = ("progressive", "projective", "rank_based")


@dataclass(frozen=True)
class ExperimentConfig:
    tables: tuple
    approaches: tuple = APPROACHES
    repeats: int = 20
    fractions: tuple = (0.4, 0.2, 0.4)
    lives: int = 3
    thresh_freq: int = 3
    seed: int = 0
    jobs: int = 1
    batch_size: int = 1
    with_replacement: bool = False
    reset_lives: bool = False

    def __post_init__(self):
        if not self.tables:
            raise ValueError("need at least one dataset")
        names = [t.name for t in self.tables]
        if len(set(names)) != len(names):
            raise ValueError(f"dataset names must be unique, got {names}")
        if not self.approaches:
            raise ValueError("need at least one approach")
        unknown = set(self.approaches) - set(APPROACHES)
        if unknown:
            raise ValueError(f"unknown approaches: {sorted(unknown)}")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")
        if self.lives < 1:
            raise ValueError("lives must be at least 1")
        if self.thresh_freq < 1:
            raise ValueError("thresh_freq must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")


@dataclass(frozen=True)
class CellResult:
    dataset: str
    approach: str
    repeat: int
    rd: int | None
    measurements: int | None
    termination: str | None
    skip_reason: str | None
    trace: metrics.AccuracyTrace | None
    correlations: tuple | None


@dataclass(frozen=True)
class ApproachSummary:
    dataset: str
    approach: str
    median_rd: float | None
    iqr_rd: float | None
    mean_rd: float | None
    median_measurements: float | None
    ratio_vs_projective: float | None
    skip_reason: str | None


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    cells: tuple
    summaries: tuple
    sk_tables: tuple  # (dataset name, SkRankTable | None)

    def cell(self, dataset_name: str, approach: str, repeat: int
             ) -> CellResult:
        for c in self.cells:
            if (c.dataset, c.approach, c.repeat) == (
                dataset_name, approach, repeat
            ):
                return c
        raise KeyError((dataset_name, approach, repeat))


def _split_for(table: ConfigurationTable, cfg: ExperimentConfig,
               repeat: int) -> dataset.PoolSplit:
    # one split per repeat, shared by every approach, so they compete
    # on identical pools
    return dataset.split(
        table, cfg.fractions,
        stable_seed(cfg.seed, "split", table.name, repeat),
    )


def run_cell(table: ConfigurationTable, cfg: ExperimentConfig,
             approach: str, repeat: int) -> CellResult:
    """One (dataset, approach, repeat) unit, reproducible in isolation."""
    split = _split_for(table, cfg, repeat)
    rng = stable_rng(cfg.seed, repeat, approach, table.name)
    kwargs = dict(
        rng=rng, batch_size=cfg.batch_size,
        with_replacement=cfg.with_replacement,
    )
    try:
        if approach == "progressive":
            outcome = samplers.progressive_sample(
                split, table, cfg.lives,
                reset_lives=cfg.reset_lives, **kwargs,
            )
        elif approach == "projective":
            outcome = samplers.projective_sample(
                split, table, cfg.thresh_freq, **kwargs,
            )
        else:
            outcome = samplers.rank_based_sample(
                split, table, cfg.lives,
                reset_lives=cfg.reset_lives, **kwargs,
            )
    except UnsupportedFeatureError as exc:
        return CellResult(
            dataset=table.name, approach=approach, repeat=repeat,
            rd=None, measurements=None, termination=None,
            skip_reason=str(exc), trace=None, correlations=None,
        )
    except ZeroDivisionError as exc:
        raise DatasetError(f"dataset {table.name!r}: {exc}") from exc

    best = samplers.predict_optimum(outcome, split.validation, table)
    ranks = dataset.true_ranks(table, split.validation)
    rd = metrics.rank_difference_of_optimum(ranks, best)
    return CellResult(
        dataset=table.name, approach=approach, repeat=repeat,
        rd=rd, measurements=outcome.measurement_count,
        termination=outcome.termination, skip_reason=None,
        trace=outcome.trace, correlations=outcome.correlations,
    )


def _aggregate(cfg: ExperimentConfig, cells: list) -> ExperimentReport:
    cells = sorted(cells, key=lambda c: (c.dataset, c.approach, c.repeat))
    by_pair: dict = {}
    for c in cells:
        by_pair.setdefault((c.dataset, c.approach), []).append(c)

    proj_median: dict = {}
    for (ds, ap), group in by_pair.items():
        if ap != "projective":
            continue
        counts = [c.measurements for c in group if c.measurements is not None]
        if counts:
            proj_median[ds] = float(np.median(counts))

    summaries = []
    for (ds, ap) in sorted(by_pair):
        group = by_pair[(ds, ap)]
        rds = [c.rd for c in group if c.rd is not None]
        counts = [c.measurements for c in group
                  if c.measurements is not None]
        if not rds:
            summaries.append(ApproachSummary(
                dataset=ds, approach=ap, median_rd=None, iqr_rd=None,
                mean_rd=None, median_measurements=None,
                ratio_vs_projective=None,
                skip_reason=group[0].skip_reason,
            ))
            continue
        med_meas = float(np.median(counts))
        ratio = None
        if ds in proj_median:
            ratio = 100.0 * med_meas / proj_median[ds]
        summaries.append(ApproachSummary(
            dataset=ds, approach=ap,
            median_rd=float(np.median(rds)),
            iqr_rd=stats.iqr(rds),
            mean_rd=float(np.mean(rds)),
            median_measurements=med_meas,
            ratio_vs_projective=ratio,
            skip_reason=None,
        ))

    sk_tables = []
    for ds in sorted({c.dataset for c in cells}):
        treatments = {}
        for ap in cfg.approaches:
            rds = [c.rd for c in by_pair.get((ds, ap), ())
                   if c.rd is not None]
            if len(rds) >= 2:
                treatments[ap] = rds
        table = None
        if treatments:
            table = stats.scott_knott(
                treatments, seed=stable_seed(cfg.seed, "scott_knott", ds)
            )
        sk_tables.append((ds, table))

    return ExperimentReport(
        config=cfg, cells=tuple(cells), summaries=tuple(summaries),
        sk_tables=tuple(sk_tables),
    )


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    work = [
        (table, approach, repeat)
        for table in config.tables
        for approach in config.approaches
        for repeat in range(config.repeats)
    ]
    if config.jobs == 1:
        cells = [run_cell(t, config, a, r) for t, a, r in work]
    else:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            futures = [
                pool.submit(run_cell, t, config, a, r) for t, a, r in work
            ]
            cells = [f.result() for f in futures]
    return _aggregate(config, cells)


def sweep_lives(config: ExperimentConfig, lives_values) -> list:
    """Rank-based sampling per lives setting: how many measurements it
    buys and how good a configuration it finds.  Rows of
    (dataset, lives, median measurements, median true rank of pick)."""
    values = list(lives_values)
    if not values:
        raise ValueError("lives_values must be non-empty")
    if any(v < 1 for v in values):
        raise ValueError("every lives value must be at least 1")
    rows = []
    for lives in values:
        cfg = ExperimentConfig(
            tables=config.tables, approaches=("rank_based",),
            repeats=config.repeats, fractions=config.fractions,
            lives=lives, thresh_freq=config.thresh_freq,
            seed=config.seed, jobs=config.jobs,
            batch_size=config.batch_size,
            with_replacement=config.with_replacement,
            reset_lives=config.reset_lives,
        )
        report = run_experiment(cfg)
        for table in config.tables:
            group = [c for c in report.cells if c.dataset == table.name]
            meas = [c.measurements for c in group]
            best_rank = [c.rd + 1 for c in group]
            rows.append({
                "dataset": table.name,
                "lives": lives,
                "median_measurements": float(np.median(meas)),
                "median_best_rank": float(np.median(best_rank)),
            })
    return rows


def spearman_growth(report: ExperimentReport, dataset_name: str,
                    approach: str) -> float:
    """Fraction of repeats whose final defined Spearman correlation is
    at least the first defined one."""
    grew = 0
    total = 0
    for c in report.cells:
        if c.dataset != dataset_name or c.approach != approach:
            continue
        if c.correlations is None:
            continue
        defined = [v for v in c.correlations if v is not None]
        if len(defined) < 2:
            continue
        total += 1
        if defined[-1] >= defined[0]:
            grew += 1
    if total == 0:
        raise ValueError(
            "no repeats with at least two defined correlations"
        )
    return grew / total


def _json_ready(value):
    if isinstance(value, float):
        return value if np.isfinite(value) else None
    return value


def report_as_dict(report: ExperimentReport) -> dict:
    cfg = report.config
    doc = {
        "settings": {
            "approaches": list(cfg.approaches),
            "repeats": cfg.repeats,
            "fractions": list(cfg.fractions),
            "lives": cfg.lives,
            "thresh_freq": cfg.thresh_freq,
            "seed": cfg.seed,
            "batch_size": cfg.batch_size,
            "with_replacement": cfg.with_replacement,
            "reset_lives": cfg.reset_lives,
            "note": (
                "thresholds in summaries are desk-scale proxies on "
                "synthetic or user-supplied tables"
            ),
        },
        "datasets": {
            t.name: {"rows": t.n_rows, "features": t.n_features}
            for t in cfg.tables
        },
        "cells": [
            {
                "dataset": c.dataset,
                "approach": c.approach,
                "repeat": c.repeat,
                "rd": c.rd,
                "measurements": c.measurements,
                "termination": c.termination,
                "skip_reason": c.skip_reason,
                "measure_kind": None if c.trace is None
                else c.trace.measure_kind,
                "trace": None if c.trace is None else [
                    {"training_size": p.training_size,
                     "score": _json_ready(p.score)}
                    for p in c.trace.points
                ],
                "spearman": None if c.correlations is None else [
                    _json_ready(v) for v in c.correlations
                ],
            }
            for c in report.cells
        ],
        "summaries": [
            {
                "dataset": s.dataset,
                "approach": s.approach,
                "median_rd": _json_ready(s.median_rd),
                "iqr_rd": _json_ready(s.iqr_rd),
                "mean_rd": _json_ready(s.mean_rd),
                "median_measurements": _json_ready(s.median_measurements),
                "ratio_vs_projective_pct":
                    _json_ready(s.ratio_vs_projective),
                "skip_reason": s.skip_reason,
            }
            for s in report.summaries
        ],
        "scott_knott": {
            ds: None if table is None else [
                {
                    "rank": row.rank,
                    "approach": row.name,
                    "median": _json_ready(row.median),
                    "iqr": _json_ready(row.iqr),
                }
                for row in table.rows
            ]
            for ds, table in report.sk_tables
        },
    }
    return doc


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_summary_csv(report: ExperimentReport) -> str:
    lines = [
        "dataset,approach,median_rd,iqr_rd,mean_rd,"
        "median_measurements,ratio_vs_projective_pct,skip_reason"
    ]
    for s in report.summaries:
        lines.append(",".join([
            s.dataset, s.approach,
            _csv_cell(s.median_rd), _csv_cell(s.iqr_rd),
            _csv_cell(s.mean_rd), _csv_cell(s.median_measurements),
            _csv_cell(s.ratio_vs_projective), _csv_cell(s.skip_reason),
        ]))
    return "\n".join(lines) + "\n"


def render_traces_csv(report: ExperimentReport) -> str:
    lines = [
        "dataset,approach,repeat,iteration,training_size,score,"
        "measure_kind,spearman"
    ]
    for c in report.cells:
        if c.trace is None:
            continue
        for i, p in enumerate(c.trace.points):
            corr = c.correlations[i] if c.correlations else None
            lines.append(",".join([
                c.dataset, c.approach, str(c.repeat), str(i + 1),
                str(p.training_size), _csv_cell(p.score),
                c.trace.measure_kind, _csv_cell(corr),
            ]))
    return "\n".join(lines) + "\n"


def render_sk_tables(report: ExperimentReport) -> str:
    blocks = []
    for ds, table in report.sk_tables:
        if table is None:
            blocks.append(f"{ds}\n(not enough data for ranking)\n")
        else:
            blocks.append(stats.render_table(table, title=ds))
    return "\n".join(blocks)


def emit_outputs(report: ExperimentReport, directory) -> dict:
    """Write report.json, summary.csv, sk_tables.txt, traces.csv.
    Contents are rendered before anything touches disk."""
    rendered = {
        "report.json": json.dumps(
            report_as_dict(report), indent=2, sort_keys=True,
            allow_nan=False,
        ) + "\n",
        "summary.csv": render_summary_csv(report),
        "sk_tables.txt": render_sk_tables(report),
        "traces.csv": render_traces_csv(report),
    }
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = {}
    for filename, text in rendered.items():
        path = out / filename
        path.write_text(text, encoding="utf-8")
        paths[filename] = path
    return paths

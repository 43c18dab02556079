"""Acceptance gate: one test per release criterion, one verdict line each.

Each test aggregates its sub-checks into a failure list, prints a single
PASS/FAIL line, and only then asserts, so the verdict is always visible.
"""

import itertools
import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest
from conftest import record_verdict

from confrank import cart, curvefit, dataset, harness, metrics, samplers
from confrank import stats, synthgen
from confrank.dataset import ConfigurationTable, PoolSplit

MASTER_SEED = 101

EASY_SEEDS = (1, 4)
HARD_SEEDS = (4, 5, 8, 9, 10)


def _verdict(criterion: int, label: str, failures: list) -> None:
    state = "FAIL" if failures else "PASS"
    line = f"[acceptance] criterion {criterion} ({label}): {state}"
    print(line)
    record_verdict(line)
    assert not failures, "; ".join(failures)


def _expect(failures: list, description: str, condition: bool) -> None:
    if not condition:
        failures.append(description)


def _close(got: float, want: float, rel: float = 1e-12) -> bool:
    return abs(got - want) <= rel * max(1.0, abs(want))


@pytest.fixture(scope="module")
def easy_report():
    tables = tuple(
        synthgen.generate(synthgen.easy_linear_spec(s)) for s in EASY_SEEDS
    )
    cfg = harness.ExperimentConfig(
        tables=tables, repeats=20, seed=MASTER_SEED, jobs=4,
    )
    return harness.run_experiment(cfg)


@pytest.fixture(scope="module")
def hard_run():
    tables = tuple(
        synthgen.generate(synthgen.hard_spec(s)) for s in HARD_SEEDS
    )
    cfg = harness.ExperimentConfig(
        tables=tables, repeats=20, lives=3, thresh_freq=3,
        fractions=(0.4, 0.2, 0.4), seed=MASTER_SEED, jobs=4,
    )
    start = time.perf_counter()
    report = harness.run_experiment(cfg)
    elapsed = time.perf_counter() - start
    return report, elapsed, tables


def test_criterion_1_metric_exactness():
    failures = []
    start = time.perf_counter()

    _expect(failures, "mmre identity",
            _close(metrics.mmre([3.0, 4.0], [3.0, 4.0]), 0.0))
    _expect(failures, "mmre single term",
            _close(metrics.mmre([110.0], [100.0]), 10.0))
    _expect(failures, "mmre mean of two terms",
            _close(metrics.mmre([110.0, 90.0], [100.0, 100.0]), 10.0))

    _expect(failures, "mrd co-monotone",
            _close(metrics.mean_rank_difference(
                [10.0, 20.0, 30.0], [1.0, 2.0, 3.0]), 0.0))
    _expect(failures, "mrd full reversal",
            _close(metrics.mean_rank_difference(
                [3.0, 2.0, 1.0], [1.0, 2.0, 3.0]), 4.0 / 3.0))
    _expect(failures, "mrd singleton",
            _close(metrics.mean_rank_difference([7.0], [9.0]), 0.0))

    ranks = {4: 1, 7: 2, 2: 10}
    _expect(failures, "rd of true optimum",
            metrics.rank_difference_of_optimum(ranks, 4) == 0)
    _expect(failures, "rd of runner-up",
            metrics.rank_difference_of_optimum(ranks, 7) == 1)
    _expect(failures, "rd of worst pick",
            metrics.rank_difference_of_optimum(ranks, 2) == 9)

    for kind in ("spearman", "pearson"):
        _expect(failures, f"{kind} identity",
                _close(metrics.correlation(
                    [1.0, 2.0, 3.0], [1.0, 2.0, 3.0], kind), 1.0))
    _expect(failures, "spearman reversal",
            _close(metrics.correlation(
                [3.0, 2.0, 1.0], [1.0, 2.0, 3.0], "spearman"), -1.0))
    _expect(failures, "spearman hand value",
            _close(metrics.correlation(
                [10.0, 30.0, 20.0], [1.0, 2.0, 3.0], "spearman"), 0.5))

    _expect(failures, "a12 all ties",
            _close(stats.a12([5.0, 5.0], [5.0, 5.0]), 0.5))
    _expect(failures, "a12 dominance",
            _close(stats.a12([2.0, 2.0], [1.0, 1.0]), 1.0))
    _expect(failures, "a12 enumerated pairs",
            _close(stats.a12([1.0, 2.0], [1.0, 2.0]), 0.5))

    _expect(failures, "runtime under 1 s",
            time.perf_counter() - start < 1.0)
    _verdict(1, "metric exactness", failures)


def _candidate_scores(X, y):
    # exact for integer-valued targets: sse(v) = sum(v^2) - sum(v)^2/|v|
    out = []
    for f in range(X.shape[1]):
        values = np.unique(X[:, f])
        for lo, hi in zip(values[:-1], values[1:]):
            t = (lo + hi) / 2.0
            mask = X[:, f] <= t
            ly, ry = y[mask], y[~mask]
            sse = lambda v: np.sum(v * v) - np.sum(v) ** 2 / v.size
            out.append((f, t, float(sse(ly) + sse(ry))))
    return out


def _brute_force_best_split(X, y):
    best = None
    for f, t, score in _candidate_scores(X, y):
        if best is None or score < best[2]:
            best = (f, t, score)
    return best


def test_criterion_2_cart_matches_brute_force():
    failures = []
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    checked = 0
    for case in range(120):
        n = int(rng.integers(2, 13))
        m = int(rng.integers(1, 5))
        X = rng.integers(0, 3, size=(n, m)).astype(float)
        y = rng.integers(-20, 21, size=n).astype(float)
        tree = cart.train(X, y)
        expected = _brute_force_best_split(X, y)
        if expected is None or np.all(y == y[0]):
            _expect(failures, f"case {case}: expected a leaf",
                    int(tree.feature[0]) < 0)
            continue
        checked += 1
        got = (int(tree.feature[0]), float(tree.threshold[0]))
        _expect(failures,
                f"case {case}: root {got} != argmin {expected[:2]}",
                got == expected[:2])
    _expect(failures, "at least 100 split cases exercised", checked >= 100)

    # unpruned tree on distinct rows reproduces its training targets
    X = np.array(
        list(itertools.product((0.0, 1.0, 2.0), repeat=3))[:12]
    )
    y = rng.normal(size=12)
    tree = cart.train(X, y)
    _expect(failures, "interpolation on distinct rows",
            np.array_equal(tree.predict(X), y))

    _expect(failures, "runtime under 10 s",
            time.perf_counter() - start < 10.0)
    _verdict(2, "tree splits match brute force", failures)


def test_criterion_3_termination_contracts():
    failures = []

    model = synthgen.InfluenceModel(offset=5.0, linear=(0.0,) * 4)
    table = synthgen.generate(
        synthgen.SynthSpec(n_binary=4, model=model, name="flat")
    )
    split = dataset.split(table, (0.4, 0.2, 0.4), seed=0)
    for lives in (1, 3):
        for name, fn in (("progressive", samplers.progressive_sample),
                         ("rank-based", samplers.rank_based_sample)):
            out = fn(split, table, lives, rng=np.random.default_rng(0))
            _expect(failures,
                    f"{name} lives={lives}: {out.measurement_count} "
                    f"measurements, wanted {lives + 1}",
                    out.measurement_count == lives + 1)
            _expect(failures, f"{name} lives={lives} termination",
                    out.termination == "lives_exhausted")

    tiny = ConfigurationTable(
        ("a", "b"),
        np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0], [1.0, 1.0]]),
        np.array([3.0, 2.0, 1.0, 4.0]),
        name="tiny",
    )
    pools = PoolSplit(
        training=np.array([0, 1]), testing=np.array([2]),
        validation=np.array([3]), seed=0,
    )
    out = samplers.projective_sample(
        pools, tiny, thresh_freq=1, rng=np.random.default_rng(0),
    )
    _expect(failures, "projective stops at the second sample",
            out.measurement_count == 2)
    _expect(failures, "projective termination",
            out.termination == "frequency_threshold")
    _expect(failures, "projective min count meets the threshold",
            out.frequency_table.minimum() == 1)
    _verdict(3, "termination contracts", failures)


def test_criterion_4_curve_fit_recovery():
    failures = []
    start = time.perf_counter()
    cases = (
        ("logarithmic", lambda n: 2.0 + 3.0 * math.log(n), (1, 2, 4, 8)),
        ("weiss_tian", lambda n: 5.0 * n / (1.0 + n), (1, 2, 4, 8)),
        ("power_law", lambda n: 4.0 * n ** 0.37, (1, 2, 4, 9)),
        ("exponential", lambda n: 1.5 * math.exp(0.2 * n), (1, 2, 3, 5)),
    )
    for family, fn, ns in cases:
        pts = [(n, fn(n)) for n in ns]
        _, _, rss = curvefit.fit_family(pts, family)
        _expect(failures, f"{family} rss {rss} above 1e-9", rss <= 1e-9)
        winner = curvefit.best_fit(pts).family
        _expect(failures, f"{family} data won by {winner}",
                winner == family)

    flat = [(n, 50.0) for n in (1, 2, 3, 4, 5)]
    projected = curvefit.best_fit(flat).projected_convergence
    _expect(failures,
            f"flat curve projected {projected}, wanted current count 5",
            projected == 5)

    _expect(failures, "runtime under 1 s",
            time.perf_counter() - start < 1.0)
    _verdict(4, "curve-fit exact recovery", failures)


def _held_out_mmre(table, seed):
    # train on 30% of the rows, score the rest
    rng = np.random.default_rng(seed)
    order = rng.permutation(table.n_rows)
    cut = int(round(table.n_rows * 0.3))
    train, hold = order[:cut], order[cut:]
    model = cart.train(table.features[train], table.performance[train])
    predicted = model.predict(table.features[hold])
    return metrics.mmre(predicted, table.performance[hold])


def test_criterion_5_hard_systems(hard_run):
    report, elapsed, tables = hard_run
    failures = []

    for table in tables:
        premise = float(np.median(
            [_held_out_mmre(table, s) for s in range(5)]
        ))
        _expect(failures,
                f"{table.name} held-out error {premise:.1f}% not above 10%",
                premise > 10.0)
        pool = dataset.split(table, (0.4, 0.2, 0.4), seed=0)
        _expect(failures, f"{table.name} validation pool below 200 rows",
                len(pool.validation) >= 200)

    summary = {(s.dataset, s.approach): s for s in report.summaries}
    frugal = 0
    for table in tables:
        s = summary[(table.name, "rank_based")]
        if s.ratio_vs_projective is not None and \
                s.ratio_vs_projective <= 60.0:
            frugal += 1
        _expect(failures,
                f"{table.name} rank-based median RD {s.median_rd}",
                s.median_rd is not None and s.median_rd <= 10.0)
    _expect(failures,
            f"rank-based within 60% of projective on {frugal}/5 systems",
            frugal >= 4)

    note = harness.report_as_dict(report)["settings"]["note"]
    _expect(failures, "report carries the desk-scale proviso",
            "desk-scale" in note)
    _expect(failures, f"runtime {elapsed:.0f}s not under 5 min",
            elapsed < 300.0)
    _verdict(5, "hard systems, few measurements", failures)


def test_criterion_6_easy_systems(easy_report):
    failures = []
    summary = {(s.dataset, s.approach): s for s in easy_report.summaries}
    for seed in EASY_SEEDS:
        for approach in harness.APPROACHES:
            s = summary[(f"easy-{seed}", approach)]
            _expect(failures,
                    f"easy-{seed} {approach} median RD {s.median_rd}",
                    s.median_rd is not None and s.median_rd <= 2.0)
    _verdict(6, "easy systems, near-optimal picks", failures)


def test_criterion_7_statistics_correctness():
    failures = []
    rng = np.random.default_rng(7)
    for _ in range(1000):
        xs = rng.normal(size=rng.integers(1, 6)).tolist()
        ys = rng.integers(0, 3, size=rng.integers(1, 6)).astype(float)
        total = stats.a12(xs, ys.tolist()) + stats.a12(ys.tolist(), xs)
        if not _close(total, 1.0):
            failures.append(f"a12 complement identity broke: {total!r}")
            break

    _expect(failures, "bootstrap on identical lists",
            not stats.bootstrap_different(
                [1.0, 2.0, 3.0], [1.0, 2.0, 3.0], seed=0))
    _expect(failures, "bootstrap on disjoint supports",
            stats.bootstrap_different([0.0] * 5, [100.0] * 5, seed=0))

    treatments = {
        "fast1": [0.0, 1.0, 0.0, 1.0],
        "fast2": [1.0, 0.0, 1.0, 0.0],
        "slow": [100.0, 101.0, 100.0, 101.0],
    }
    forward = stats.scott_knott(treatments, seed=0)
    _expect(failures, "separation example ranks",
            forward.ranks() == {"fast1": 1, "fast2": 1, "slow": 2})
    backward = stats.scott_knott(
        dict(reversed(list(treatments.items()))), seed=0,
    )
    _expect(failures, "insertion-order invariance",
            forward.ranks() == backward.ranks())
    _verdict(7, "statistics correctness", failures)


def test_criterion_8_byte_identical_reports(tmp_path):
    failures = []
    table = synthgen.generate(synthgen.easy_linear_spec(3))
    csv_path = tmp_path / "system.csv"
    csv_path.write_text(dataset.to_csv(table), encoding="utf-8")

    reports = []
    for jobs in ("1", "3"):
        out = tmp_path / f"out{jobs}"
        proc = subprocess.run(
            [sys.executable, "-m", "confrank.cli", "run",
             "--data", str(csv_path), "--repeats", "5",
             "--seed", "7", "--jobs", jobs, "--out", str(out)],
            capture_output=True, text=True, timeout=300,
        )
        _expect(failures, f"jobs={jobs} exited {proc.returncode}: "
                f"{proc.stderr.strip()}", proc.returncode == 0)
        if proc.returncode == 0:
            reports.append((out / "report.json").read_bytes())
    _expect(failures, "report.json bytes differ across --jobs",
            len(reports) == 2 and reports[0] == reports[1])
    _verdict(8, "determinism across job counts", failures)


def test_criterion_9_correlation_growth(easy_report):
    failures = []
    for seed in EASY_SEEDS:
        for approach in harness.APPROACHES:
            grew = harness.spearman_growth(
                easy_report, f"easy-{seed}", approach,
            )
            _expect(failures,
                    f"easy-{seed} {approach} grew in {grew:.0%} of repeats",
                    grew >= 0.7)
    _verdict(9, "correlation grows with sampling", failures)

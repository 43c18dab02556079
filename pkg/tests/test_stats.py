"""Effect size, bootstrap significance, and Scott-Knott ranking."""

import numpy as np
import pytest

from confrank.stats import (
    SkRankTable,
    a12,
    bootstrap_different,
    iqr,
    render_table,
    scott_knott,
)

REL = 1e-12


def test_a12_all_ties_is_half():
    assert a12([3.0, 3.0], [3.0, 3.0]) == 0.5


def test_a12_full_dominance():
    assert a12([2.0, 2.0], [1.0, 1.0]) == 1.0
    assert a12([1.0, 1.0], [2.0, 2.0]) == 0.0


def test_a12_enumerated_pairs():
    # pairs (1,1) tie, (1,2) lose, (2,1) win, (2,2) tie -> 2/4
    assert a12([1.0, 2.0], [1.0, 2.0]) == pytest.approx(0.5, rel=REL)


def test_a12_complement_identity():
    rng = np.random.default_rng(8)
    for _ in range(200):
        xs = rng.normal(size=int(rng.integers(1, 12)))
        ys = rng.normal(size=int(rng.integers(1, 12)))
        assert a12(xs, ys) + a12(ys, xs) == pytest.approx(1.0, rel=REL)


def test_a12_monotone_transform_invariant():
    xs = [0.1, 0.9, 0.5]
    ys = [0.2, 0.4, 0.8]
    assert a12(np.exp(xs), np.exp(ys)) == pytest.approx(
        a12(xs, ys), rel=REL
    )


def test_a12_rejects_empty():
    with pytest.raises(ValueError):
        a12([], [1.0])


def test_bootstrap_identical_lists_not_different():
    xs = [3.0, 4.0, 5.0, 6.0]
    assert bootstrap_different(xs, list(xs), seed=0) is False


def test_bootstrap_disjoint_supports_differ():
    assert bootstrap_different([0.0] * 5, [100.0] * 5, seed=0) is True


def test_bootstrap_deterministic_given_seed():
    rng = np.random.default_rng(1)
    xs = rng.normal(size=10).tolist()
    ys = rng.normal(loc=0.5, size=10).tolist()
    first = bootstrap_different(xs, ys, seed=123)
    assert all(
        bootstrap_different(xs, ys, seed=123) == first for _ in range(3)
    )


def test_bootstrap_false_positive_rate_stays_nominal():
    """One distribution split in half should test equal nearly always."""
    false_hits = 0
    for seed in range(100):
        rng = np.random.default_rng((7777, seed))
        pooled = rng.normal(size=24)
        if bootstrap_different(pooled[:12], pooled[12:], seed=seed):
            false_hits += 1
    assert false_hits <= 5  # 95% confidence leaves about this much


def test_bootstrap_argument_validation():
    with pytest.raises(ValueError):
        bootstrap_different([1.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        bootstrap_different([1.0, 2.0], [1.0, 2.0], confidence=1.5)
    with pytest.raises(ValueError):
        bootstrap_different([1.0, 2.0], [1.0, 2.0], iterations=0)


def test_iqr_linear_interpolation():
    assert iqr([1.0, 2.0, 3.0, 4.0]) == pytest.approx(1.5, rel=REL)
    assert iqr([5.0]) == 0.0


def test_scott_knott_single_treatment():
    table = scott_knott({"only": [1.0, 2.0]}, seed=0)
    assert table.ranks() == {"only": 1}


def test_scott_knott_identical_treatments_share_rank():
    samples = [1.0, 2.0, 1.0, 2.0]
    table = scott_knott({"a": samples, "b": list(samples)}, seed=0)
    assert table.ranks() == {"a": 1, "b": 1}


def test_scott_knott_clear_separation():
    treatments = {
        "fast1": [0.0, 1.0, 0.0, 1.0],
        "fast2": [1.0, 0.0, 1.0, 0.0],
        "slow": [100.0, 101.0, 100.0, 101.0],
    }
    table = scott_knott(treatments, seed=0)
    assert table.ranks() == {"fast1": 1, "fast2": 1, "slow": 2}


def test_scott_knott_insertion_order_invariant():
    treatments = {
        "a": [0.0, 1.0, 0.5, 0.2],
        "b": [10.0, 11.0, 10.5, 10.2],
        "c": [0.1, 0.9, 0.4, 0.3],
    }
    forward = scott_knott(treatments, seed=5)
    backward = scott_knott(dict(reversed(list(treatments.items()))), seed=5)
    assert forward.ranks() == backward.ranks()


def test_scott_knott_constant_shift_preserves_structure():
    treatments = {
        "a": [0.0, 1.0, 0.5, 0.2],
        "b": [10.0, 11.0, 10.5, 10.2],
        "c": [0.1, 0.9, 0.4, 0.3],
    }
    shifted = {k: [s + 500.0 for s in v] for k, v in treatments.items()}
    assert scott_knott(treatments, seed=5).ranks() == \
        scott_knott(shifted, seed=5).ranks()


def test_scott_knott_ranks_are_contiguous_and_ordered_by_median():
    rng = np.random.default_rng(17)
    treatments = {
        f"t{i}": (rng.normal(loc=3.0 * i, size=8)).tolist() for i in range(5)
    }
    table = scott_knott(treatments, seed=2)
    ranks = [r.rank for r in table.rows]
    medians = [r.median for r in table.rows]
    assert ranks[0] == 1
    assert all(b - a in (0, 1) for a, b in zip(ranks, ranks[1:]))
    assert medians == sorted(medians)


def test_scott_knott_small_effect_does_not_split():
    # medians differ slightly but distributions overlap heavily
    rng = np.random.default_rng(18)
    base = rng.normal(size=20)
    treatments = {"a": base.tolist(), "b": (base + 0.01).tolist()}
    table = scott_knott(treatments, seed=3)
    assert table.ranks() == {"a": 1, "b": 1}


def test_scott_knott_input_validation():
    with pytest.raises(ValueError):
        scott_knott({}, seed=0)
    with pytest.raises(ValueError):
        scott_knott({"a": [1.0]}, seed=0)


def test_render_table_lists_every_treatment_once():
    treatments = {
        "alpha": [0.0, 1.0, 0.0, 1.0],
        "beta": [100.0, 101.0, 100.0, 101.0],
    }
    text = render_table(scott_knott(treatments, seed=0), title="demo")
    assert text.splitlines()[0] == "demo"
    assert text.count("alpha") == 1
    assert text.count("beta") == 1
    assert "median" in text and "iqr" in text

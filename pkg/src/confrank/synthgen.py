"""Synthetic configurable systems with known ground truth.

Performance is an influence model: an offset, linear feature weights,
pairwise interaction weights, optional three-way multiplicative terms,
plus additive Gaussian noise.  Everything is a pure function of the
spec, so tests can brute-force the true optimum independently.

Landscape difficulty is a knob: zero noise and linear weights give
systems a tree learns almost exactly; dense interactions, three-way
terms, and noise push held-out error up while leaving enough rank
structure for rank-based sampling to exploit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from confrank.dataset import ConfigurationTable
from confrank.errors import GenerationError

__all__ = [
    "InfluenceModel",
    "SynthSpec",
    "easy_linear_spec",
    "generate",
    "hard_spec",
    "random_model",
]

_DEFAULT_CAP = 10_000


@dataclass(frozen=True)
class InfluenceModel:
    """Deterministic performance surface over feature vectors."""

    offset: float
    linear: tuple
    pairwise: tuple = ()   # (i, j, weight)
    threeway: tuple = ()   # (i, j, k, weight), the "hard" terms

    def evaluate(self, features) -> np.ndarray:
        X = np.asarray(features, dtype=np.float64)
        single = X.ndim == 1
        if single:
            X = X.reshape(1, -1)
        if X.shape[1] != len(self.linear):
            raise ValueError(
                f"model covers {len(self.linear)} features, "
                f"got {X.shape[1]}"
            )
        y = self.offset + X @ np.asarray(self.linear, dtype=np.float64)
        for i, j, w in self.pairwise:
            y = y + w * X[:, i] * X[:, j]
        for i, j, k, w in self.threeway:
            y = y + w * X[:, i] * X[:, j] * X[:, k]
        return y[0] if single else y


@dataclass(frozen=True)
class SynthSpec:
    n_binary: int
    model: InfluenceModel
    n_numeric: int = 0
    numeric_levels: tuple = (0.0, 1.0, 2.0, 3.0)
    noise: float = 0.0
    seed: int = 0
    cap: int = _DEFAULT_CAP
    name: str = "synthetic"


def random_model(
    n_features: int,
    rng: np.random.Generator,
    interactions: str = "dense",
    threeway_terms: int = 0,
    weight_scale: float = 1.0,
) -> InfluenceModel:
    """Draw an influence model; dense wires every feature pair, sparse
    keeps each pair with probability 0.2, none keeps only the linear
    part."""
    if interactions not in ("none", "sparse", "dense"):
        raise ValueError(f"unknown interaction density {interactions!r}")
    signs = rng.choice((-1.0, 1.0), size=n_features)
    linear = tuple(
        float(w) for w in signs * rng.uniform(0.5, 5.0, n_features)
        * weight_scale
    )
    pairwise = []
    if interactions != "none":
        keep = 1.0 if interactions == "dense" else 0.2
        for i, j in itertools.combinations(range(n_features), 2):
            if rng.random() < keep:
                pairwise.append(
                    (i, j, float(rng.uniform(-1.5, 1.5) * weight_scale))
                )
    threeway = []
    for _ in range(threeway_terms):
        i, j, k = sorted(rng.choice(n_features, size=3, replace=False))
        threeway.append(
            (int(i), int(j), int(k),
             float(rng.uniform(-4.0, 4.0) * weight_scale))
        )
    offset = float(rng.uniform(20.0, 60.0))
    return InfluenceModel(
        offset=offset, linear=linear,
        pairwise=tuple(pairwise), threeway=tuple(threeway),
    )


def _feature_names(spec: SynthSpec) -> tuple:
    names = [f"b{i + 1}" for i in range(spec.n_binary)]
    names += [f"n{i + 1}" for i in range(spec.n_numeric)]
    return tuple(names)


def _domain_sizes(spec: SynthSpec) -> int:
    return 2 ** spec.n_binary * len(spec.numeric_levels) ** spec.n_numeric


def _enumerate_rows(spec: SynthSpec) -> np.ndarray:
    domains = [(0.0, 1.0)] * spec.n_binary
    domains += [tuple(spec.numeric_levels)] * spec.n_numeric
    rows = np.array(list(itertools.product(*domains)), dtype=np.float64)
    return rows


def _sample_rows(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """Distinct random rows when the cross product is too big to
    enumerate; retries are bounded so a near-saturated domain fails
    loudly instead of spinning."""
    m = spec.n_binary + spec.n_numeric
    levels = np.asarray(spec.numeric_levels, dtype=np.float64)
    seen = set()
    rows = []
    attempts = 0
    max_attempts = 100 * spec.cap
    while len(rows) < spec.cap:
        attempts += 1
        if attempts > max_attempts:
            raise GenerationError(
                f"could not collect {spec.cap} distinct rows from a "
                f"domain of {_domain_sizes(spec)} after {max_attempts} "
                "draws"
            )
        row = np.empty(m, dtype=np.float64)
        row[:spec.n_binary] = rng.integers(0, 2, size=spec.n_binary)
        if spec.n_numeric:
            row[spec.n_binary:] = levels[
                rng.integers(0, levels.size, size=spec.n_numeric)
            ]
        key = row.tobytes()
        if key in seen:
            continue
        seen.add(key)
        rows.append(row)
    return np.asarray(rows, dtype=np.float64)


def generate(spec: SynthSpec) -> ConfigurationTable:
    if spec.n_binary + spec.n_numeric < 1:
        raise ValueError("need at least one feature")
    if spec.n_binary < 0 or spec.n_numeric < 0:
        raise ValueError("feature counts cannot be negative")
    if spec.cap < 1:
        raise ValueError("cap must be at least 1")
    if spec.noise < 0:
        raise ValueError("noise standard deviation cannot be negative")
    if spec.n_numeric and len(set(spec.numeric_levels)) < 2:
        raise ValueError("numeric features need at least 2 distinct levels")

    rng = np.random.default_rng(spec.seed)
    if _domain_sizes(spec) <= spec.cap:
        features = _enumerate_rows(spec)
    else:
        features = _sample_rows(spec, rng)

    performance = spec.model.evaluate(features)
    if spec.noise > 0:
        performance = performance + rng.normal(
            0.0, spec.noise, size=performance.shape
        )
    low = performance.min()
    if low <= 0.0:
        # keep the landscape shape; just push it strictly positive
        performance = performance + (1.0 - low)
    return ConfigurationTable(
        feature_names=_feature_names(spec),
        features=features,
        performance=performance,
        name=spec.name,
    )


def easy_linear_spec(seed: int, n_binary: int = 5) -> SynthSpec:
    """Zero-noise, interaction-free landscape a tree can nearly
    interpolate.

    Geometrically decaying weights with randomized signs: a handful of
    samples pin down the dominant features, and the small domain keeps
    the test pool representative.
    """
    rng = np.random.default_rng(seed)
    base, decay = 32.0, 0.45
    signs = rng.choice((-1.0, 1.0), size=n_binary)
    linear = tuple(
        float(signs[i] * base * decay**i) for i in range(n_binary)
    )
    model = InfluenceModel(offset=100.0, linear=linear)
    return SynthSpec(
        n_binary=n_binary, model=model, noise=0.0, seed=seed,
        name=f"easy-{seed}",
    )


def hard_spec(seed: int, n_binary: int = 9) -> SynthSpec:
    """Landscape with high held-out error but intact top ranks.

    Four dominant decaying weights fix which corner of the space is
    good.  Difficulty comes from three-way penalty spikes anchored at a
    bad setting of one of those dominant features: the spikes never
    fire inside the near-optimal region, so they inflate prediction
    error on the held-out pool without scrambling the leading ranks.
    Micro pairwise terms among the remaining features plus additive
    noise keep leaves from being exact.
    """
    rng = np.random.default_rng(seed)
    n_top = 4
    linear = [0.0] * n_binary
    for rank in range(n_top):
        # positive weight: deselecting the feature is the good choice
        linear[rank] = 30.0 * 0.6**rank
    pairwise = tuple(
        (i, j, float(rng.uniform(-0.3, 0.3)))
        for i, j in itertools.combinations(range(n_top, n_binary), 2)
    )
    spikes = []
    for _ in range(12):
        anchor = int(rng.integers(0, n_top))
        j, k = rng.choice(np.arange(n_top, n_binary), size=2,
                          replace=False)
        spikes.append((
            anchor, int(min(j, k)), int(max(j, k)),
            float(rng.uniform(8.0, 25.0)),
        ))
    model = InfluenceModel(
        offset=25.0, linear=tuple(linear), pairwise=pairwise,
        threeway=tuple(spikes),
    )
    return SynthSpec(
        n_binary=n_binary, model=model, noise=1.5, seed=seed,
        name=f"hard-{seed}",
    )

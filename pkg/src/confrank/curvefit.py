"""Learning-curve fitting for budget projection.

Each family is fit by closed-form linear least squares in a transformed
space (log or reciprocal), which is deterministic and has no iteration
knobs.  Goodness of fit (rss) is always judged in the original space so
families with different transforms compare fairly.

Families:
    logarithmic   s(n) = a + b*ln(n)
    weiss_tian    s(n) = a*n / (b + n)
    power_law     s(n) = a * n**b
    exponential   s(n) = a * exp(b*n)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from confrank.errors import FamilyDomainError, NoFitError

__all__ = [
    "FAMILIES",
    "LearningCurveFit",
    "best_fit",
    "evaluate_family",
    "fit_family",
]

FAMILIES = ("logarithmic", "weiss_tian", "power_law", "exponential")

# scan ceiling when the caller supplies no training-pool cap
_UNCAPPED_LIMIT = 2 ** 20


@dataclass(frozen=True)
class LearningCurveFit:
    family: str
    params: tuple[float, float]
    rss: float
    projected_convergence: int


def evaluate_family(family: str, a: float, b: float, n) -> np.ndarray:
    n = np.asarray(n, dtype=np.float64)
    if family == "logarithmic":
        return a + b * np.log(n)
    if family == "weiss_tian":
        return a * n / (b + n)
    if family == "power_law":
        return a * np.power(n, b)
    if family == "exponential":
        return a * np.exp(b * n)
    raise ValueError(f"unknown curve family {family!r}")


def _check_points(points) -> tuple[np.ndarray, np.ndarray]:
    ns, scores = [], []
    for n, s in points:
        if n != int(n) or int(n) < 1:
            raise ValueError(f"training size must be an integer >= 1, got {n!r}")
        ns.append(int(n))
        scores.append(float(s))
    n_arr = np.asarray(ns, dtype=np.float64)
    s_arr = np.asarray(scores, dtype=np.float64)
    if len(set(ns)) < 3:
        raise ValueError(
            f"need at least 3 points with distinct sizes, got {len(set(ns))}"
        )
    if not np.isfinite(s_arr).all():
        raise ValueError("scores must be finite")
    return n_arr, s_arr


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares (intercept, slope) for y = intercept + slope*x."""
    xm = x.mean()
    ym = y.mean()
    dx = x - xm
    slope = float(np.sum(dx * (y - ym)) / np.sum(dx * dx))
    return float(ym - slope * xm), slope


def fit_family(points, family: str) -> tuple[float, float, float]:
    """Returns (a, b, rss) with rss measured in the original space."""
    n, s = _check_points(points)
    if family == "logarithmic":
        intercept, slope = _linfit(np.log(n), s)
        a, b = intercept, slope
    elif family == "weiss_tian":
        if np.any(s == 0.0):
            raise FamilyDomainError(
                "weiss_tian", "scores of 0 break the reciprocal transform"
            )
        intercept, slope = _linfit(1.0 / n, 1.0 / s)
        if intercept == 0.0:
            raise FamilyDomainError(
                "weiss_tian", "degenerate fit with no finite asymptote"
            )
        a = 1.0 / intercept
        b = slope * a
    elif family == "power_law":
        if np.any(s <= 0.0):
            raise FamilyDomainError(
                "power_law", "nonpositive scores break the log transform"
            )
        intercept, slope = _linfit(np.log(n), np.log(s))
        a, b = math.exp(intercept), slope
    elif family == "exponential":
        if np.any(s <= 0.0):
            raise FamilyDomainError(
                "exponential", "nonpositive scores break the log transform"
            )
        intercept, slope = _linfit(n, np.log(s))
        a, b = math.exp(intercept), slope
    else:
        raise ValueError(f"unknown curve family {family!r}")

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        resid = s - evaluate_family(family, a, b, n)
        rss = float(np.sum(resid * resid))
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(rss)):
        raise FamilyDomainError(
            family, "fit produced non-finite parameters or residuals"
        )
    return a, b, rss


def _projected_convergence(
    family: str, a: float, b: float, last_n: int,
    epsilon: float, cap: int | None,
) -> int:
    limit = _UNCAPPED_LIMIT if cap is None else cap
    start = max(1, last_n)
    if start >= limit:
        return limit
    chunk = 4096
    while start < limit:
        stop = min(start + chunk, limit)
        ns = np.arange(start, stop + 1, dtype=np.float64)
        with np.errstate(over="ignore", invalid="ignore"):
            curve = evaluate_family(family, a, b, ns)
            steps = np.diff(curve)
        hits = np.nonzero(np.isfinite(steps) & (steps < epsilon))[0]
        if hits.size:
            return start + int(hits[0])
        start = stop
    return limit


def best_fit(points, *, epsilon: float = 0.1, cap: int | None = None
             ) -> LearningCurveFit:
    """Fit every family, keep the lowest original-space rss (ties go to
    the family listed first), and project where the curve flattens:
    the smallest n at or past the last observation where one more
    sample is predicted to gain less than epsilon."""
    n, _ = _check_points(points)
    if cap is not None and cap < 1:
        raise ValueError("cap must be at least 1")
    best = None
    for family in FAMILIES:
        try:
            a, b, rss = fit_family(points, family)
        except FamilyDomainError:
            continue
        if best is None or rss < best[0]:
            best = (rss, family, a, b)
    if best is None:
        raise NoFitError(
            "every curve family violated its domain on these points"
        )
    rss, family, a, b = best
    last_n = int(n.max())
    projected = _projected_convergence(family, a, b, last_n, epsilon, cap)
    return LearningCurveFit(
        family=family, params=(float(a), float(b)), rss=rss,
        projected_convergence=projected,
    )

"""Likelihood-ratio test that several binomial samples share one probability."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .binom import BinomialSample

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _lower_series(a: float, x: float) -> float:
    """Regularised lower incomplete gamma P(a, x) by its power series."""
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _upper_fraction(a: float, x: float) -> float:
    """Regularised upper incomplete gamma Q(a, x) by modified Lentz continued fraction."""
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammaincc(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a): series below x = a + 1, continued fraction above."""
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _lower_series(a, x))
    return _upper_fraction(a, x)


def chisq_sf(x: float, df: int) -> float:
    """Upper tail P(X > x) of a chi-square variable with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError(f"df must be at least 1, got {df}")
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    return gammaincc(0.5 * df, 0.5 * x)


@dataclass(frozen=True)
class LrtResult:
    statistic: float
    df: int
    p_value: float
    pooled_p: float
    per_sample_p: tuple[float, ...]
    degenerate: bool = False


def _xlogy_ratio(y: float, expected: float) -> float:
    # y log(y / expected) with 0 log(0 / x) = 0
    if y == 0:
        return 0.0
    return y * math.log(y / expected)


def lrt_equal_proportions(samples: Sequence[BinomialSample]) -> LrtResult:
    """Deviance test of p_1 = ... = p_k for independent binomial samples.

    statistic = 2 sum_i [y_i log(y_i / (n_i pbar)) + (n_i - y_i) log((n_i - y_i) / (n_i (1 - pbar)))]
    with pbar = sum y / sum n, referred to chi-square with k - 1 df.  When
    pbar is 0 or 1 every sample sits on the boundary: the statistic is 0, the
    p-value 1, and the result is flagged ``degenerate``.
    """
    if len(samples) < 2:
        raise ValueError("need at least two samples")
    ys = [s.successes for s in samples]
    ns = [s.trials for s in samples]
    pooled = sum(ys) / sum(ns)
    per_sample = tuple(y / n for y, n in zip(ys, ns))
    df = len(samples) - 1
    if pooled in (0.0, 1.0):
        return LrtResult(0.0, df, 1.0, pooled, per_sample, degenerate=True)
    terms = []
    for y, n in zip(ys, ns):
        terms.append(_xlogy_ratio(y, n * pooled))
        terms.append(_xlogy_ratio(n - y, n * (1.0 - pooled)))
    statistic = max(0.0, 2.0 * math.fsum(terms))
    return LrtResult(statistic, df, chisq_sf(statistic, df), pooled, per_sample)

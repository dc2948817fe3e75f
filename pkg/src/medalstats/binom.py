"""Binomial inference for medal shares.

A nation winning ``y`` of the ``n = 3m`` medals at a Games with ``m`` events
is treated as ``y ~ Binomial(n, p)``.  Besides point estimates and Wilson
score intervals this module provides the half-corrected confidence
distribution

    C(p) = P_p(Y > y) + 1/2 P_p(Y = y),

its confidence curve ``cc(p) = |1 - 2 C(p)|`` and the intervals read off it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .dataset import GamesRecord

IntervalMethod = Literal["wilson", "cd"]
AverageMode = Literal["pooled", "mean_of_percents"]


@dataclass(frozen=True)
class BinomialSample:
    successes: int
    trials: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.successes <= self.trials:
            raise ValueError(f"need 0 <= successes <= trials, got {self.successes}/{self.trials}")

    @classmethod
    def from_games(cls, record: GamesRecord) -> BinomialSample:
        return cls(record.total, record.chances)

    @property
    def estimate(self) -> float:
        return self.successes / self.trials


@dataclass(frozen=True)
class ConfidenceInterval:
    level: float
    low: float
    high: float

    def __post_init__(self):
        if not 0.0 <= self.low <= self.high <= 1.0:
            raise ValueError(f"invalid interval [{self.low}, {self.high}]")

    def __contains__(self, p: float) -> bool:
        return self.low <= p <= self.high

    def overlaps(self, other: ConfidenceInterval) -> bool:
        return self.low <= other.high and other.low <= self.high

    @property
    def width(self) -> float:
        return self.high - self.low


def _check_level(level: float) -> None:
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")


def point_estimate(s: BinomialSample) -> float:
    return s.successes / s.trials


# --------------------------------------------------------------------------
# binomial probabilities
#
# The mass at the mode is evaluated with Loader's saddle-point form
# (Stirling-series remainders plus a deviance term), which keeps full
# relative precision for large n where differences of log-factorials lose
# several digits.  The rest of the mass function is accumulated outward from
# the mode through the exact log ratios pmf(k+1)/pmf(k).

_LOG_2PI = math.log(2.0 * math.pi)
_HALF_LOG_2PI = 0.5 * _LOG_2PI


def _stirlerr(n: float) -> float:
    """log(n!) - log(sqrt(2 pi n) (n/e)^n)."""
    if n <= 15.0:
        return math.lgamma(n + 1.0) - (n + 0.5) * math.log(n) + n - _HALF_LOG_2PI
    nn = n * n
    s0, s1, s2, s3, s4 = 1 / 12, 1 / 360, 1 / 1260, 1 / 1680, 1 / 1188
    return (s0 - (s1 - (s2 - (s3 - s4 / nn) / nn) / nn) / nn) / n


def _bd0(x: float, mean: float) -> float:
    """Deviance term x log(x/mean) + mean - x without cancellation."""
    if abs(x - mean) < 0.1 * (x + mean):
        v = (x - mean) / (x + mean)
        s = (x - mean) * v
        ej = 2.0 * x * v
        v2 = v * v
        j = 1
        while True:
            ej *= v2
            s1 = s + ej / (2 * j + 1)
            if s1 == s:
                return s1
            s = s1
            j += 1
    return x * math.log(x / mean) + mean - x


def binomial_logpmf(k: int, n: int, p: float) -> float:
    if not 0 <= k <= n:
        return -math.inf
    q = 1.0 - p
    if p == 0.0:
        return 0.0 if k == 0 else -math.inf
    if q == 0.0:
        return 0.0 if k == n else -math.inf
    if k == 0:
        return n * math.log1p(-p)
    if k == n:
        return n * math.log(p)
    lc = _stirlerr(n) - _stirlerr(k) - _stirlerr(n - k) - _bd0(k, n * p) - _bd0(n - k, n * q)
    lf = _LOG_2PI + math.log(k) + math.log1p(-k / n)
    return lc - 0.5 * lf


def binomial_pmf_all(n: int, p: float) -> np.ndarray:
    """pmf(0..n) as an array."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    out = np.zeros(n + 1)
    if p == 0.0:
        out[0] = 1.0
        return out
    if p == 1.0:
        out[n] = 1.0
        return out
    mode = min(n, max(0, int(math.floor((n + 1) * p))))
    log_mode = binomial_logpmf(mode, n, p)
    log_odds = math.log(p) - math.log1p(-p)

    logs = np.empty(n + 1)
    logs[mode] = log_mode
    if mode < n:
        j = np.arange(mode, n)
        steps = np.log((n - j) / (j + 1.0))
        logs[mode + 1 :] = log_mode + np.cumsum(steps) + np.arange(1, n - mode + 1) * log_odds
    if mode > 0:
        j = np.arange(mode, 0, -1)
        steps = np.log(j / (n - j + 1.0))
        logs[mode - 1 :: -1] = log_mode + np.cumsum(steps) - np.arange(1, mode + 1) * log_odds
    return np.exp(logs)


def binomial_cdf(y: int, n: int, p: float) -> float:
    """P(Y <= y) for Y ~ Binomial(n, p)."""
    if y < 0:
        return 0.0
    if y >= n:
        return 1.0
    pmf = binomial_pmf_all(n, p)
    return min(1.0, math.fsum(pmf[: y + 1]))


def binomial_sf(y: int, n: int, p: float) -> float:
    """P(Y > y)."""
    if y < 0:
        return 1.0
    if y >= n:
        return 0.0
    pmf = binomial_pmf_all(n, p)
    return min(1.0, math.fsum(pmf[y + 1 :]))


# --------------------------------------------------------------------------
# normal quantile
#
# Acklam's rational approximation (relative error below 1.15e-9 over the
# whole range) followed by one Halley correction step against erfc, which
# brings the result to near machine precision.

_A = (
    -3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
    1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00,
)
_B = (
    -5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
    6.680131188771972e01, -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
    -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00,
)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00, 3.754408661907416e00)
_P_LOW = 0.02425


def normal_quantile(u: float) -> float:
    if not 0.0 < u < 1.0:
        if u == 0.0:
            return -math.inf
        if u == 1.0:
            return math.inf
        raise ValueError(f"probability must lie in [0, 1], got {u}")
    if u > 0.5:
        # 1 - u is exact here; the lower tail keeps the refinement accurate
        return -normal_quantile(1.0 - u)
    if u < _P_LOW:
        q = math.sqrt(-2.0 * math.log(u))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0
        )
    else:
        q = u - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        )
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - u
    g = e * math.sqrt(2.0 * math.pi) * math.exp(0.5 * x * x)
    return x - g / (1.0 + 0.5 * x * g)


# --------------------------------------------------------------------------
# confidence distribution and curve


def cd_half_corrected(s: BinomialSample, p: float) -> float:
    """Half-corrected confidence distribution C(p) at ``p``; nondecreasing in p."""
    y, n = s.successes, s.trials
    pmf = binomial_pmf_all(n, p)
    half = 0.5 * float(pmf[y])
    lower = math.fsum(pmf[:y]) + half
    if lower < 0.5:
        # sum the short side; 1 - (small) stays monotone where a long upper sum would wobble
        return min(1.0, 1.0 - lower)
    return min(1.0, math.fsum(pmf[y + 1 :]) + half)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi)."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cd_quantile(s: BinomialSample, u: float, tol: float = 1e-12) -> float:
    """Smallest p with C(p) >= u, clamped to [0, 1]."""
    if cd_half_corrected(s, 0.0) >= u:
        return 0.0
    if cd_half_corrected(s, 1.0) <= u:
        return 1.0
    return bisect(lambda p: cd_half_corrected(s, p) - u, 0.0, 1.0, tol)


def cd_median(s: BinomialSample) -> float:
    return cd_quantile(s, 0.5)


@dataclass(frozen=True)
class ConfidenceCurve:
    sample: BinomialSample
    p: tuple[float, ...]
    cc: tuple[float, ...]

    @property
    def grid(self) -> list[tuple[float, float]]:
        return list(zip(self.p, self.cc))

    def minimum(self) -> tuple[float, float]:
        i = min(range(len(self.cc)), key=self.cc.__getitem__)
        return self.p[i], self.cc[i]


def confidence_curve(s: BinomialSample, grid_size: int = 2001) -> ConfidenceCurve:
    """cc(p) = |1 - 2 C(p)| on a uniform grid plus a fine patch around the median."""
    if grid_size < 3:
        raise ValueError("grid_size must be at least 3")
    step = 1.0 / (grid_size - 1)
    median = cd_median(s)
    patch = median + np.linspace(-step, step, 201)
    ps = np.unique(np.clip(np.concatenate([np.linspace(0.0, 1.0, grid_size), patch, [median]]), 0.0, 1.0))
    cc = [abs(1.0 - 2.0 * cd_half_corrected(s, float(p))) for p in ps]
    return ConfidenceCurve(s, tuple(float(p) for p in ps), tuple(cc))


def curve_interval(s: BinomialSample, level: float = 0.90) -> ConfidenceInterval:
    """{p : cc(p) <= level}, i.e. C(p) between (1-level)/2 and (1+level)/2.

    When y = 0 the lower end is 0 (C(0) = 1/2 already), and when y = n the
    upper end is 1.
    """
    _check_level(level)
    low = cd_quantile(s, 0.5 * (1.0 - level))
    high = cd_quantile(s, 0.5 * (1.0 + level))
    return ConfidenceInterval(level, low, high)


def wilson_interval(s: BinomialSample, level: float = 0.90) -> ConfidenceInterval:
    _check_level(level)
    n = s.trials
    phat = s.successes / n
    z = normal_quantile(0.5 + 0.5 * level)
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (phat + z2 / (2.0 * n)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom
    low = 0.0 if s.successes == 0 else max(0.0, centre - half)
    high = 1.0 if s.successes == n else min(1.0, centre + half)
    return ConfidenceInterval(level, low, high)


def interval(s: BinomialSample, level: float = 0.90, method: IntervalMethod = "wilson") -> ConfidenceInterval:
    if method == "wilson":
        return wilson_interval(s, level)
    if method == "cd":
        return curve_interval(s, level)
    raise ValueError(f"unknown interval method {method!r}")


# --------------------------------------------------------------------------
# the Norwegian series


@dataclass(frozen=True)
class SeriesPoint:
    year: int
    estimate: float
    interval: ConfidenceInterval

    @property
    def percent(self) -> float:
        return 100.0 * self.estimate


def series_percentages(
    games: Iterable[GamesRecord], level: float = 0.90, method: IntervalMethod = "wilson"
) -> list[SeriesPoint]:
    """Medal share per Games, total / (3 * events), with a pointwise interval."""
    out = []
    for r in games:
        s = BinomialSample.from_games(r)
        out.append(SeriesPoint(r.year, point_estimate(s), interval(s, level, method)))
    return out


def pooled_average(
    games: Sequence[GamesRecord], from_year: int, mode: AverageMode = "pooled"
) -> float:
    """Average medal share over the Games held after ``from_year``.

    ``pooled`` is sum(medals) / sum(3 * events); ``mean_of_percents`` is the
    unweighted mean of the per-Games shares.  Both are fractions in [0, 1].
    """
    chosen = [r for r in games if r.year > from_year]
    if not chosen:
        raise ValueError(f"no Games after {from_year}")
    if mode == "pooled":
        return sum(r.total for r in chosen) / sum(r.chances for r in chosen)
    if mode == "mean_of_percents":
        return math.fsum(r.total / r.chances for r in chosen) / len(chosen)
    raise ValueError(f"unknown averaging mode {mode!r}")


def gold_complement_share(golds: int, events: int) -> float:
    """Share of events whose gold went to someone else."""
    if events < 1 or not 0 <= golds <= events:
        raise ValueError(f"need 0 <= golds <= events and events >= 1, got {golds}/{events}")
    return (events - golds) / events


@dataclass(frozen=True)
class CoverageResult:
    p: float
    trials: int
    level: float
    reps: int
    seed: int
    covered: int
    exact: float

    @property
    def coverage(self) -> float:
        return self.covered / self.reps


def coverage_simulation(
    p: float = 0.1,
    trials: int = 348,
    level: float = 0.90,
    reps: int = 10_000,
    seed: int = 2026,
    method: IntervalMethod = "cd",
) -> CoverageResult:
    """Share of simulated samples whose interval covers the true ``p``.

    Draws come from ``numpy.random.default_rng(seed)``.  Intervals are
    computed once per distinct count.  ``exact`` is the coverage obtained
    by summing the binomial mass of every covering count (counts with mass
    below 1e-18 are skipped).
    """
    _check_level(level)
    ys = np.random.default_rng(seed).binomial(trials, p, size=reps)
    hits = {}
    for y in np.unique(ys).tolist():
        hits[y] = p in interval(BinomialSample(y, trials), level, method)
    covered = sum(int(c) for y, c in zip(*np.unique(ys, return_counts=True)) if hits[int(y)])

    pmf = binomial_pmf_all(trials, p)
    exact = math.fsum(
        float(pmf[y]) for y in range(trials + 1)
        if pmf[y] > 1e-18 and p in interval(BinomialSample(y, trials), level, method)
    )
    return CoverageResult(p, trials, level, reps, seed, covered, exact)

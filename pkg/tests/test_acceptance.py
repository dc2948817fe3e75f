"""One test per acceptance criterion, each printing a PASS/FAIL line.

The lines are also collected into an "acceptance criteria" section at the
end of the pytest run.
"""

import math
import os
import random
import subprocess
import sys
import time
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from medalstats.binom import (
    BinomialSample,
    binomial_cdf,
    cd_half_corrected,
    confidence_curve,
    coverage_simulation,
    curve_interval,
    point_estimate,
    wilson_interval,
)
from medalstats.dataset import aggregate_speedskating, historical_totals, round1, validate_games, validate_totals
from medalstats.inferencetests import chisq_sf, lrt_equal_proportions
from medalstats.ranking import rank_with_ties, spearman_rho
from medalstats.regress import RegressionDataset, SeparationError, fit_logistic, loglik, score

from oracles import binomial_cdf_mp, pearson_on_ranks

ROOT = Path(__file__).resolve().parent.parent
NESTED_RUN = "MEDALSTATS_NESTED_SUITE"


def test_criterion_01_lrt(criterion):
    samples = [BinomialSample(41, 348), BinomialSample(33, 348), BinomialSample(26, 348)]
    res = lrt_equal_proportions(samples)
    t0 = time.perf_counter()
    reps = 1000
    for _ in range(reps):
        lrt_equal_proportions(samples)
    per_call = (time.perf_counter() - t0) / reps
    ok = 0.151 <= res.p_value <= 0.155 and per_call < 1e-3
    assert criterion(1, "LRT reproduction", ok, f"p = {res.p_value:.4f}, {per_call * 1e6:.0f} us per call")


def test_criterion_02_point_estimates(criterion):
    got = [round(100 * point_estimate(BinomialSample(y, 348)), 1) for y in (41, 33, 26)]
    ok = got == [11.8, 9.5, 7.5]
    assert criterion(2, "point estimates", ok, " / ".join(f"{v}%" for v in got))


def test_criterion_03_percent_column(criterion, games):
    matches = sum(round1(100 * g.total / (3 * g.events)) == g.percent for g in games)
    ok = matches == len(games) == 25
    assert criterion(3, "percent column", ok, f"{matches}/{len(games)} rows match to one decimal")


def test_criterion_04_nation_totals(criterion, nations):
    report = validate_totals(nations)
    sums = ", ".join(f"{c.name.split()[0]} {c.actual}" for c in report.checks)
    assert criterion(4, "nation table sums", report.ok and len(report.checks) == 5, sums)


# men, ladies per nation as printed in the combined speedskating table
COMBINED_PRINTED = {
    "NED": (86, 60), "NOR": (85, 5), "USA": (45, 33), "GER": (10, 61), "SOV": (28, 30),
    "CAN": (20, 27), "JPN": (12, 17), "KOR": (16, 4), "FIN": (17, 2), "SWE": (18, 0),
    "RUS": (7, 9), "ITA": (8, 4), "CHN": (5, 7), "CZE": (2, 7), "POL": (3, 4),
    "AUT": (3, 3), "BEL": (3, 0), "BLR": (2, 0), "NKR": (0, 1), "KAZ": (0, 1), "DEN": (1, 0),
}


def test_criterion_05_speedskating(criterion, games, men, ladies):
    rows = aggregate_speedskating(men, ladies, "split")
    got = {r.code: (r.men, r.ladies) for r in rows}
    reproduced = got == COMBINED_PRINTED and [r.code for r in rows] == list(COMBINED_PRINTED)
    by = {r.code: r.total for r in rows}
    headline = {"NED": 146, "NOR": 90, "USA": 78, "GER": 71}
    headline_ok = all(by[c] == v for c, v in headline.items())
    notes = validate_games(games).notes + men.notes() + ladies.notes()
    documented = any("446" in n for n in notes) and any("KOR" in n for n in notes)
    ok = reproduced and headline_ok and documented
    detail = ", ".join(f"{c} {by[c]}" for c in headline) + f"; {len(rows)} rows, {len(notes)} data notes reported"
    assert criterion(5, "speedskating consistency", ok, detail)


def test_criterion_06_historical_totals(criterion, games):
    t = historical_totals(games)
    notes = validate_games(games).notes
    ok = (
        t.events == 1279
        and t.medals in (446, 447)
        and any("446" in n and "447" in n for n in notes)
        and round1(t.percent) == round1(34.9)
    )
    detail = f"events {t.events}, medals {t.medals} (counts {t.medals_from_counts}), {round1(t.percent)}%"
    assert criterion(6, "historical totals", ok, detail)


def test_criterion_07_overlap(criterion):
    cis = [curve_interval(BinomialSample(y, 348), 0.90) for y in (41, 33, 26)]
    overlap = all(a.overlaps(b) for a in cis for b in cis)
    swapped = [cis[0], cis[1], curve_interval(BinomialSample(5, 348), 0.90)]
    separated = not all(a.overlaps(b) for a in swapped for b in swapped)
    ok = overlap and separated
    assert criterion(7, "interval overlap", ok, f"2026 samples overlap {overlap}, with 5/348 disjoint {separated}")


def test_criterion_08_confidence_machinery(criterion, games):
    grid = np.arange(0.0, 1.0 + 5e-4, 1e-3)
    samples = [BinomialSample.from_games(g) for g in games] + [BinomialSample(33, 348), BinomialSample(26, 348)]
    monotone = all(
        all(b >= a for a, b in zip(cs, cs[1:]))
        for cs in ([cd_half_corrected(s, float(p)) for p in grid] for s in samples[-3:] + samples[:2])
    )
    minimum_ok = True
    for s in samples:
        p, c = confidence_curve(s).minimum()
        minimum_ok &= c < 1e-3 and abs(p - s.estimate) <= 2 / s.trials
    nested = True
    for s in samples:
        a, b, c = (curve_interval(s, lv) for lv in (0.5, 0.9, 0.99))
        nested &= c.low <= b.low <= a.low <= a.high <= b.high <= c.high
    gaps = []
    for g in games:
        s = BinomialSample.from_games(g)
        w, c = wilson_interval(s, 0.9), curve_interval(s, 0.9)
        gaps.append(max(abs(w.low - c.low), abs(w.high - c.high)))
    ok = monotone and minimum_ok and nested and max(gaps) < 0.015
    detail = f"monotone {monotone}, minimum {minimum_ok}, nested {nested}, max Wilson gap {max(gaps):.4f}"
    assert criterion(8, "confidence machinery", ok, detail)


def test_criterion_09_oracles(criterion):
    rng = random.Random(2026)
    cdf_err = 0.0
    for _ in range(100):
        n = rng.randint(1, 500)
        y = rng.randint(0, n)
        p = rng.random()
        cdf_err = max(cdf_err, abs(binomial_cdf(y, n, p) - binomial_cdf_mp(y, n, p)))
    chi_err = max(abs(chisq_sf(x, 2) - math.exp(-x / 2)) for x in (0.1, 1.0, 3.74, 10.0))
    rho_err = 0.0
    done = 0
    while done < 50:
        n = rng.randint(3, 40)
        a = [rng.randint(0, 10) for _ in range(n)]
        b = [rng.randint(0, 10) for _ in range(n)]
        if len(set(a)) < 2 or len(set(b)) < 2:
            continue
        codes = [f"N{i}" for i in range(n)]
        rho = spearman_rho(rank_with_ties(zip(codes, a)), rank_with_ties(zip(codes, b)))
        rho_err = max(rho_err, abs(rho - pearson_on_ranks(a, b)))
        done += 1
    ok = cdf_err < 1e-10 and chi_err < 1e-12 and rho_err < 1e-12
    detail = f"cdf {cdf_err:.1e}, chisq {chi_err:.1e}, spearman {rho_err:.1e}"
    assert criterion(9, "oracle equivalence", ok, detail)


def _gradient_check(fit, data, h=1e-5):
    worst = 0.0
    for shift in (0.0, 0.05):
        beta = fit.coefficients + shift
        analytic = score(beta, data)
        for j in range(len(beta)):
            e = np.zeros_like(beta)
            e[j] = h
            fd = (loglik(beta + e, data) - loglik(beta - e, data)) / (2 * h)
            worst = max(worst, abs(analytic[j] - fd) / max(abs(analytic[j]), 1.0))
    return worst


def test_criterion_10_regression(criterion):
    one = RegressionDataset.from_rows([((), 41, 348)])
    two = RegressionDataset.from_rows([([1.0], 41, 348), ([0.0], 26, 348)])
    rng = np.random.default_rng(7)
    synthetic = RegressionDataset.from_rows(
        [([float(x), float(z)], int(rng.integers(5, 40)), 60) for x, z in rng.normal(size=(12, 2))]
    )
    fits = [(fit_logistic(d), d) for d in (one, two, synthetic)]
    b0_err = abs(fits[0][0].coefficients[0] - math.log(41 / 307))
    b1_err = abs(fits[1][0].coefficients[1] - math.log((41 / 307) / (26 / 322)))
    grad_worst = max(_gradient_check(f, d) for f, d in fits if f.converged)
    all_converged = all(f.converged for f, _ in fits)
    separated = RegressionDataset.from_rows([([0.0], 0, 20), ([1.0], 0, 20), ([2.0], 20, 20)])
    try:
        fit_logistic(separated)
        raised = False
    except SeparationError:
        raised = True
    ok = b0_err < 1e-8 and b1_err < 1e-8 and all_converged and grad_worst < 1e-4 and raised
    detail = f"intercept err {b0_err:.1e}, log-odds err {b1_err:.1e}, gradient {grad_worst:.1e}, separation raised {raised}"
    assert criterion(10, "regression", ok, detail)


def test_criterion_11_coverage(criterion):
    t0 = time.perf_counter()
    res = coverage_simulation(p=0.1, trials=348, level=0.90, reps=10_000, seed=2026)
    elapsed = time.perf_counter() - t0
    ok = 0.89 <= res.coverage <= 0.91 and elapsed < 30
    detail = (
        f"empirical {res.coverage:.4f} (seed {res.seed}, {res.reps} reps), exact {res.exact:.5f}, {elapsed:.1f} s"
    )
    assert criterion(11, "coverage simulation", ok, detail)


def test_criterion_12_per_capita(criterion):
    ratio = 5195921 / 37531
    ok = f"{ratio:.3f}" == "138.443"
    assert criterion(12, "per-capita ratio", ok, f"NOR/LIE = {ratio:.3f}")


@pytest.mark.skipif(os.environ.get(NESTED_RUN) == "1", reason="inside the timed run")
def test_criterion_13_suite_runtime(criterion, tmp_path):
    report = tmp_path / "suite.xml"
    env = dict(os.environ, **{NESTED_RUN: "1"})
    t0 = time.perf_counter()
    subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", f"--junitxml={report}", str(ROOT / "tests")],
        capture_output=True, text=True, cwd=ROOT, env=env, check=False,
    )
    elapsed = time.perf_counter() - t0
    cases = ET.parse(report).getroot().iter("testcase")
    golden = [c for c in cases if c.get("name", "").startswith("test_golden")]
    golden_ok = bool(golden) and all(len(c) == 0 for c in golden)
    ok = elapsed < 120 and golden_ok
    # pass/fail of the other criteria is reported by their own lines; this one measures the run
    detail = f"{elapsed:.1f} s for the full suite, {len(golden)} golden checks {'passed' if golden_ok else 'FAILED'}"
    assert criterion(13, "suite runtime", ok, detail)

#!/usr/bin/env python3
"""Print the headline numbers reproduced from the embedded tables."""

from medalstats.binom import (
    BinomialSample,
    coverage_simulation,
    curve_interval,
    gold_complement_share,
    pooled_average,
    wilson_interval,
)
from medalstats.dataset import (
    aggregate_speedskating,
    historical_totals,
    load_games,
    load_nations,
    load_speedskating,
    validate_totals,
)
from medalstats.inferencetests import lrt_equal_proportions
from medalstats.ranking import per_capita, scheme_correlation


def section(title: str) -> None:
    print(f"\n== {title}")


def main() -> None:
    games = load_games()
    nations = load_nations()
    men, ladies = load_speedskating("men"), load_speedskating("ladies")

    section("2026: NOR, USA, ITA")
    samples = {"NOR": BinomialSample(41, 348), "USA": BinomialSample(33, 348), "ITA": BinomialSample(26, 348)}
    for code, s in samples.items():
        cd, w = curve_interval(s), wilson_interval(s)
        print(
            f"{code}  {100 * s.estimate:5.1f}%   cd [{100 * cd.low:.2f}, {100 * cd.high:.2f}]"
            f"   wilson [{100 * w.low:.2f}, {100 * w.high:.2f}]"
        )
    lrt = lrt_equal_proportions(list(samples.values()))
    print(f"LRT statistic {lrt.statistic:.4f} on {lrt.df} df, p = {lrt.p_value:.3f}")

    section("Norwegian series")
    t = historical_totals(games)
    print(f"events {t.events}, medals {t.medals} printed / {t.medals_from_counts} from counts, {t.percent:.2f}%")
    for mode in ("pooled", "mean_of_percents"):
        print(f"average after 1960, {mode}: {100 * pooled_average(games, 1960, mode):.2f}%")
    print(f"non-NOR golds 2026: {100 * gold_complement_share(18, 116):.1f}%")

    section("2026 table")
    report = validate_totals(nations)
    print(", ".join(f"{c.name} {c.actual}" for c in report.checks))
    for scheme in ("op7", "fib13"):
        print(f"spearman {scheme} vs medals: {scheme_correlation(nations, scheme):.4f}")

    section("speedskating")
    for row in aggregate_speedskating(men, ladies)[:4]:
        print(f"{row.code}  {row.men} + {row.ladies} = {row.total}")

    section("per capita, 2018")
    lie, nor = per_capita("LIE", 37531, 1), per_capita("NOR", 5195921, 39)
    print(f"LIE {lie.inhabitants_per_medal:.0f} per medal, NOR {nor.inhabitants_per_medal:.0f} per medal")
    print(f"population ratio {nor.population / lie.population:.3f}")

    section("coverage, p = 0.1, n = 348, 90%")
    r = coverage_simulation()
    print(f"simulated {r.coverage:.4f} (seed {r.seed}), exact {r.exact:.5f}")


if __name__ == "__main__":
    main()

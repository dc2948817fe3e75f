#!/usr/bin/env python3
"""Write the medal-share series and the 2026 confidence curves as SVG.

    python3 scripts/reproduce_figures.py [--outdir figures] [--level 0.9]
"""

import argparse
from pathlib import Path

from medalstats.binom import (
    BinomialSample,
    confidence_curve,
    curve_interval,
    pooled_average,
    series_percentages,
)
from medalstats.dataset import load_games
from medalstats.plots import PlotSpec, write_svg

SAMPLES_2026 = {"NOR": (41, 348), "USA": (33, 348), "ITA": (26, 348)}


def series_figure(level: float, from_year: int, mode: str) -> PlotSpec:
    games = load_games()
    points = series_percentages(games, level)
    return PlotSpec(
        "series_band",
        f"Medals won by Norway, percent, with {level:.0%} band",
        {
            "estimate": [(p.year, p.estimate) for p in points],
            "low": [(p.year, p.interval.low) for p in points],
            "high": [(p.year, p.interval.high) for p in points],
        },
        level_line=pooled_average(games, from_year, mode),
    )


def curves_figure(level: float) -> PlotSpec:
    samples = {c: BinomialSample(y, n) for c, (y, n) in SAMPLES_2026.items()}
    notes = []
    for s in samples.values():
        ci = curve_interval(s, level)
        notes += [(ci.low, f"{ci.low:.3f}"), (ci.high, f"{ci.high:.3f}")]
    return PlotSpec(
        "confidence_curves",
        "Confidence curves for the three medal winning nations, 2026",
        {c: confidence_curve(s).grid for c, s in samples.items()},
        level_line=level,
        annotations=notes,
    )


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="figures")
    ap.add_argument("--level", type=float, default=0.90)
    ap.add_argument("--from", dest="from_year", type=int, default=1960)
    ap.add_argument("--avg", choices=("pooled", "mean_of_percents"), default="pooled")
    args = ap.parse_args()

    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name, spec in (
        ("medal_share.svg", series_figure(args.level, args.from_year, args.avg)),
        ("confidence_curves.svg", curves_figure(args.level)),
    ):
        print(write_svg(spec, out / name))


if __name__ == "__main__":
    main()

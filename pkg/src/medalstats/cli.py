"""Command-line front end: ``medalstats <command> [options]``.

Data goes to stdout, diagnostics to stderr.  Exit status is 0 when the
command's check holds, 1 when it does not (integrity failure, intervals that
fail to overlap, a fit that cannot be done), 2 on usage errors and 3 on I/O
errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from itertools import combinations
from pathlib import Path
from typing import Sequence

from . import __version__
from .binom import (
    BinomialSample,
    confidence_curve,
    curve_interval,
    pooled_average,
    series_percentages,
)
from .dataset import (
    DataError,
    aggregate_speedskating,
    load_games,
    load_nations,
    load_speedskating,
    parse_games_table,
    parse_nation_table,
    parse_speedskating,
    read_data,
    validate_games,
    validate_op_ranks,
    validate_totals,
    ValidationReport,
)
from .inferencetests import lrt_equal_proportions
from .plots import DEFAULT_COLORS, PlotSpec, render_svg
from .ranking import (
    nation_scores,
    parse_populations,
    per_capita,
    rank_with_ties,
    spearman_rho,
)
from .regress import RankDeficientError, SeparationError, fit_logistic, parse_regression_table

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

_SAMPLE = re.compile(r"([A-Za-z][A-Za-z0-9_]*)=(\d+)/(\d+)")
AVG_MODES = {"pooled": "pooled", "mean": "mean_of_percents"}


class UsageError(Exception):
    pass


def parse_sample(text: str) -> tuple[str, BinomialSample]:
    m = _SAMPLE.fullmatch(text.strip())
    if not m:
        raise UsageError(f"bad sample {text!r}; expected CODE=y/n, e.g. NOR=41/348")
    y, n = int(m.group(2)), int(m.group(3))
    if n < 1 or y > n:
        raise UsageError(f"bad sample {text!r}; need 0 <= y <= n and n >= 1")
    return m.group(1), BinomialSample(y, n)


def _level(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("level must lie in (0, 1)")
    return v


def _p4(x: float) -> str:
    return f"{x:.4f}"


def _pct1(x: float) -> str:
    return f"{100.0 * x:.1f}"


def _table(rows: list[list[str]], fmt: str) -> str:
    if fmt == "tsv":
        return "\n".join("\t".join(r) for r in rows) + "\n"
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [c.ljust(w) if j == 0 or not _numeric(c) else c.rjust(w) for j, (c, w) in enumerate(zip(r, widths))]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _numeric(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _colors(text: str | None) -> tuple[str, ...]:
    if not text:
        return DEFAULT_COLORS
    return tuple(c.strip() for c in text.split(",") if c.strip())


def _write(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# --------------------------------------------------------------------------
# commands


def cmd_series(args) -> int:
    games = load_games(args.data)
    method = "cd" if args.interval == "cd" else "wilson"
    points = series_percentages(games, args.level, method)
    mode = AVG_MODES[args.avg]
    average = pooled_average(games, args.from_year, mode)

    rows = [["year", "percent", "low", "high"]]
    for pt in points:
        rows.append([str(pt.year), _pct1(pt.estimate), _pct1(pt.interval.low), _pct1(pt.interval.high)])
    spec = PlotSpec(
        kind="series_band",
        title=f"Medals won by Norway, percent, with {args.level:.0%} band",
        series={
            "estimate": [(pt.year, pt.estimate) for pt in points],
            "low": [(pt.year, pt.interval.low) for pt in points],
            "high": [(pt.year, pt.interval.high) for pt in points],
        },
        level_line=average,
        output_path=args.out,
        colors=_colors(args.colors),
    )
    if args.out:
        out = Path(args.out)
        _write(out, render_svg(spec))
        _write(out.with_suffix(".tsv"), _table(rows, "tsv"))
    if args.format == "svg" and not args.out:
        sys.stdout.write(render_svg(spec))
        return EXIT_OK
    sys.stdout.write(_table(rows, args.format))
    if args.format == "text":
        print(f"average after {args.from_year} ({args.avg}): {_pct1(average)}")
        if args.out:
            print(f"wrote {args.out} and {Path(args.out).with_suffix('.tsv')}")
    return EXIT_OK


def cmd_ccurve(args) -> int:
    samples = [parse_sample(s) for s in args.samples]
    if not 1 <= len(samples) <= 6:
        raise UsageError("give between 1 and 6 samples")
    intervals = {code: curve_interval(s, args.level) for code, s in samples}
    overlap = all(intervals[a].overlaps(intervals[b]) for a, b in combinations(intervals, 2))

    rows = [["code", "y", "n", "estimate", "low", "high"]]
    for code, s in samples:
        ci = intervals[code]
        rows.append([code, str(s.successes), str(s.trials), _p4(s.estimate), _p4(ci.low), _p4(ci.high)])

    spec = None
    if args.out or args.format == "svg":
        curves = {code: confidence_curve(s, args.grid).grid for code, s in samples}
        notes = [(x, f"{x:.3f}") for ci in intervals.values() for x in (ci.low, ci.high)]
        spec = PlotSpec(
            kind="confidence_curves",
            title="Confidence curves for medal probabilities",
            series=curves,
            level_line=args.level,
            output_path=args.out,
            annotations=notes,
            colors=_colors(args.colors),
        )
    if args.out:
        _write(args.out, render_svg(spec))
    if args.format == "svg" and not args.out:
        sys.stdout.write(render_svg(spec))
    else:
        sys.stdout.write(_table(rows, args.format))
        print(f"overlap at level {args.level:g}: {'true' if overlap else 'false'}")
    return EXIT_OK if overlap else EXIT_FAIL


def cmd_lrt(args) -> int:
    samples = [parse_sample(s) for s in args.samples]
    if len(samples) < 2:
        raise UsageError("the test needs at least two samples")
    res = lrt_equal_proportions([s for _, s in samples])
    print("samples   " + " ".join(f"{c}={s.successes}/{s.trials}" for c, s in samples))
    print(f"statistic {res.statistic:.4f}")
    print(f"df        {res.df}")
    print(f"pooled p  {_p4(res.pooled_p)}")
    if res.degenerate:
        print("note: pooled proportion on the boundary; statistic set to 0")
    print(f"p = {res.p_value:.3f}")
    return EXIT_OK


def cmd_table(args) -> int:
    rows = load_nations(args.data)
    chosen = [r for r in rows if args.all_nations or r.has_medals]
    scored = rank_with_ties(nation_scores(chosen, args.scheme, include_points_only=True))
    medal_ranks = rank_with_ties(nation_scores(chosen, "medals", include_points_only=True))
    rho = spearman_rho(scored, medal_ranks)
    by_code = {r.code: r for r in chosen}

    out = [["rank", "code", "gold", "silver", "bronze", "total", "score"]]
    for e in scored.entries:
        m = by_code[e.code].medals
        out.append([f"{e.rank:g}", e.code, str(m.gold), str(m.silver), str(m.bronze), str(m.total), f"{e.score:.1f}"])
    sys.stdout.write(_table(out, "tsv" if args.format == "tsv" else "text"))
    print(f"spearman rho ({args.scheme} vs medals, {len(chosen)} nations): {rho:.4f}")
    return EXIT_OK


def cmd_skating(args) -> int:
    try:
        men = load_speedskating("men", args.data)
        ladies = load_speedskating("ladies", args.data)
    except DataError as e:
        print(f"integrity failure: {e}", file=sys.stderr)
        return EXIT_FAIL
    if args.mode == "combined":
        for row in aggregate_speedskating(men, ladies, args.kor):
            if args.format == "tsv":
                print(f"{row.code}\t{row.men}\t{row.ladies}\t{row.total}")
            else:
                print(f"{row.code}  {row.men:>2} + {row.ladies:>2} = {row.total:>3}")
        return EXIT_OK
    table = men if args.mode == "men" else ladies
    sums = table.column_sums()
    rows = [["code", "total", "rows"]]
    for code in sorted(table.nations, key=lambda c: -table.header_totals[c]):
        rows.append([code, str(table.header_totals[code]), str(sums[code])])
    sys.stdout.write(_table(rows, "tsv" if args.format == "tsv" else "text"))
    for note in table.notes():
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def cmd_regress(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8") if args.file else read_data("regress", args.data)
    try:
        data = parse_regression_table(text)
    except ValueError as e:
        print(f"bad regression table: {e}", file=sys.stderr)
        return EXIT_FAIL
    try:
        fit = fit_logistic(data)
    except (SeparationError, RankDeficientError) as e:
        print(f"cannot fit: {e}", file=sys.stderr)
        return EXIT_FAIL
    print(fit.summary())
    return EXIT_OK if fit.converged else EXIT_FAIL


def cmd_percapita(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8") if args.file else read_data("populations", args.data)
    try:
        pops = parse_populations(text)
    except ValueError as e:
        print(f"bad population table: {e}", file=sys.stderr)
        return EXIT_FAIL
    medals_2026 = {}
    if any(m is None for _, _, m in pops):
        medals_2026 = {r.code: r.medals.total for r in load_nations(args.data)}
    rows = [["code", "population", "medals", "inhabitants_per_medal", "medals_per_million"]]
    entries = []
    for code, pop, medals in pops:
        e = per_capita(code, pop, medals if medals is not None else medals_2026.get(code, 0))
        entries.append(e)
        per = "-" if e.inhabitants_per_medal is None else f"{e.inhabitants_per_medal:.1f}"
        rows.append([code, str(pop), str(e.medals), per, f"{e.medals_per_million:.3f}"])
    sys.stdout.write(_table(rows, "tsv" if args.format == "tsv" else "text"))
    if args.format != "tsv" and len(entries) > 1:
        base = min(entries, key=lambda e: e.population)
        for e in entries:
            if e is not base:
                print(f"population ratio {e.code}/{base.code} = {e.population / base.population:.3f}")
    return EXIT_OK


def run_validation(data_dir=None) -> ValidationReport:
    report = ValidationReport()
    games = parse_games_table(read_data("games", data_dir))
    report.add("Norwegian series rows", 25, len(games))
    report.extend(validate_games(games))
    nations = parse_nation_table(read_data("nations", data_dir))
    report.extend(validate_totals(nations))
    report.extend(validate_op_ranks(nations))
    for sex in ("men", "ladies"):
        table = parse_speedskating(read_data(sex, data_dir), sex)
        report.notes.extend(table.notes())
    return report


def cmd_validate(args) -> int:
    try:
        report = run_validation(args.data)
    except DataError as e:
        print(f"integrity failure: {e}", file=sys.stderr)
        return EXIT_FAIL
    for line in report.lines():
        if args.verbose or not line.startswith("[ok]"):
            print(line)
    passed = sum(c.ok for c in report.checks)
    print(f"{passed}/{len(report.checks)} checks exact, {len(report.failures)} failures")
    return EXIT_OK if report.ok else EXIT_FAIL


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", metavar="DIR", help="read tables from DIR instead of the embedded copies")
    common.add_argument("--format", choices=("text", "tsv", "svg"), default="text")

    parser = argparse.ArgumentParser(prog="medalstats", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"medalstats {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", parents=[common], help="Norwegian medal share per Games with a confidence band")
    p.add_argument("--level", type=_level, default=0.90)
    p.add_argument("--from", dest="from_year", type=int, default=1960, help="average over Games after this year")
    p.add_argument("--avg", choices=tuple(AVG_MODES), default="pooled")
    p.add_argument("--interval", choices=("wilson", "cd"), default="wilson")
    p.add_argument("--out", metavar="PATH", help="write SVG here and a .tsv sidecar next to it")
    p.add_argument("--colors", help="comma-separated colours")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("ccurve", parents=[common], help="confidence curves and intervals for CODE=y/n samples")
    p.add_argument("samples", nargs="+", metavar="CODE=y/n")
    p.add_argument("--level", type=_level, default=0.90)
    p.add_argument("--grid", type=int, default=2001)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--colors")
    p.set_defaults(func=cmd_ccurve)

    p = sub.add_parser("lrt", parents=[common], help="likelihood-ratio test of equal probabilities")
    p.add_argument("samples", nargs="+", metavar="CODE=y/n")
    p.set_defaults(func=cmd_lrt)

    p = sub.add_parser("table", parents=[common], help="2026 nations ranked under a scoring scheme")
    p.add_argument("--scheme", choices=("medals", "op7", "fib13"), default="medals")
    p.add_argument("--all-nations", action="store_true", help="include points-only nations")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("skating", parents=[common], help="speedskating medal tables")
    p.add_argument("mode", choices=("men", "ladies", "combined"), nargs="?", default="combined")
    p.add_argument("--kor", choices=("split", "lumped"), default="split")
    p.set_defaults(func=cmd_skating)

    p = sub.add_parser("regress", parents=[common], help="grouped logistic regression on a TSV")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_regress)

    p = sub.add_parser("percapita", parents=[common], help="inhabitants per medal")
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_percapita)

    p = sub.add_parser("validate", parents=[common], help="run every dataset integrity check")
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"medalstats {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"medalstats {args.command}: {e}", file=sys.stderr)
        return EXIT_IO
    except DataError as e:
        print(f"medalstats {args.command}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

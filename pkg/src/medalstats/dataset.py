"""Embedded medal tables: parsing, integrity checks and aggregation.

Four tab-separated tables ship with the package (see ``data/``):

``games_norway.tsv``
    host, year, events, gold, silver, bronze, total, nations, percent
``nations_2026.tsv``
    rank, code, gold, silver, bronze, total, op, op_rank.  A blank rank
    means "tied with the row above"; blank medal columns mark a nation that
    scored Olympic Points without winning a medal.
``speedskating_men.tsv`` / ``speedskating_ladies.tsv``
    first row nation codes, second row per-nation totals, then one row per
    Games year; blank cells are zero.  A cell such as ``1[NKR]`` counts one
    medal under the column nation that was actually won by ``NKR``.

Lines starting with ``#`` are comments, except ``#@`` directives.  The only
directive is ``#@ allow-mismatch CODE`` in the speedskating tables: it
records that a column's body rows do not add up to its printed total, so the
mismatch is carried as a note instead of raising.

Tables are stored exactly as printed; inconsistencies in the source are
reported, never patched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Literal

Sex = Literal["men", "ladies"]
KorMode = Literal["split", "lumped"]

# Column sums printed under the 2026 table.
NATION_TABLE_TOTALS = {
    "gold": 116,
    "silver": 118,
    "bronze": 115,
    "total": 349,
    "op": Decimal("2552"),
}


class DataError(ValueError):
    """Base class for problems with a data table."""


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class IntegrityError(DataError):
    """The table parsed, but its numbers contradict each other."""


def round1(value: Fraction | int | float) -> Decimal:
    """Round to one decimal, halves away from zero (the way tables are printed)."""
    if isinstance(value, float):
        value = Fraction(value)
    value = Fraction(value)
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    return exact.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class MedalCounts:
    gold: int = 0
    silver: int = 0
    bronze: int = 0

    def __post_init__(self):
        for name in ("gold", "silver", "bronze"):
            if getattr(self, name) < 0:
                raise IntegrityError(f"negative {name} count: {getattr(self, name)}")

    @property
    def total(self) -> int:
        return self.gold + self.silver + self.bronze

    def __add__(self, other: MedalCounts) -> MedalCounts:
        return MedalCounts(
            self.gold + other.gold, self.silver + other.silver, self.bronze + other.bronze
        )


@dataclass(frozen=True)
class GamesRecord:
    """One Winter Games row of the Norwegian series.

    ``total`` is the printed total column.  It normally equals
    ``norway.total``; where it does not (1998) the printed value is kept and
    drives ``percent``, as in the source.
    """

    year: int
    host: str
    events: int
    norway: MedalCounts
    total: int
    nations: int
    percent: Decimal

    @property
    def chances(self) -> int:
        return 3 * self.events

    @property
    def recomputed_percent(self) -> Decimal:
        return round1(Fraction(100 * self.total, self.chances))

    @property
    def total_matches_counts(self) -> bool:
        return self.total == self.norway.total


@dataclass(frozen=True)
class NationRow:
    rank: int | None
    code: str
    medals: MedalCounts
    olympic_points: Decimal
    op_rank: int

    @property
    def has_medals(self) -> bool:
        return self.medals.total > 0


@dataclass(frozen=True)
class Reassignment:
    """Medals printed under ``column`` in ``year`` that belong to ``origin``."""

    year: int
    column: str
    origin: str
    count: int


@dataclass(frozen=True)
class SpeedskatingTable:
    sex: Sex
    nations: tuple[str, ...]
    header_totals: dict[str, int]
    rows: tuple[tuple[int, tuple[int, ...]], ...]
    reassignments: tuple[Reassignment, ...] = ()
    allowed_mismatches: frozenset[str] = frozenset()

    def column(self, code: str) -> dict[int, int]:
        j = self.nations.index(code)
        return {year: counts[j] for year, counts in self.rows}

    def column_sums(self) -> dict[str, int]:
        return {c: sum(counts[j] for _, counts in self.rows) for j, c in enumerate(self.nations)}

    def mismatches(self) -> dict[str, tuple[int, int]]:
        """Nations whose body rows disagree with the printed total: code -> (rows, printed)."""
        sums = self.column_sums()
        return {
            c: (sums[c], self.header_totals[c])
            for c in self.nations
            if sums[c] != self.header_totals[c]
        }

    def notes(self) -> list[str]:
        out = []
        for code, (rows, printed) in self.mismatches().items():
            out.append(
                f"{self.sex} {code}: body rows sum to {rows}, printed total is {printed}"
            )
        for r in self.reassignments:
            out.append(
                f"{self.sex} {r.year} {r.column}: {r.count} medal(s) won by {r.origin},"
                f" printed under {r.column}"
            )
        return out


@dataclass(frozen=True)
class CombinedSpeedskatingRow:
    code: str
    men: int
    ladies: int

    @property
    def total(self) -> int:
        return self.men + self.ladies


@dataclass
class Check:
    name: str
    expected: object
    actual: object
    documented: bool = False

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def __str__(self) -> str:
        status = "ok" if self.ok else ("NOTE" if self.documented else "FAIL")
        return f"[{status}] {self.name}: expected {self.expected}, got {self.actual}"


@dataclass
class ValidationReport:
    """Outcome of a batch of integrity checks.

    ``documented`` checks are known quirks of the printed source; they are
    listed but do not make the report fail.
    """

    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, name: str, expected, actual, documented: bool = False) -> Check:
        check = Check(name, expected, actual, documented)
        self.checks.append(check)
        return check

    def extend(self, other: ValidationReport) -> None:
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok and not c.documented]

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> Iterator[str]:
        yield from (str(c) for c in self.checks)
        yield from (f"note: {n}" for n in self.notes)


# --------------------------------------------------------------------------
# reading helpers


def _data_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, [cell.strip() for cell in line.split("\t")]


def _directives(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.startswith("#@"):
            yield lineno, line[2:].split()


def _int(cell: str, lineno: int, column: str, blank: int | None = None) -> int:
    if cell == "" and blank is not None:
        return blank
    try:
        value = int(cell)
    except ValueError:
        raise ParseError(f"expected an integer, got {cell!r}", lineno, column) from None
    return value


def _count(cell: str, lineno: int, column: str, blank: int | None = None) -> int:
    value = _int(cell, lineno, column, blank)
    if value < 0:
        raise IntegrityError(f"line {lineno}, column {column!r}: negative count {value}")
    return value


def _decimal(cell: str, lineno: int, column: str) -> Decimal:
    try:
        return Decimal(cell)
    except ArithmeticError:
        raise ParseError(f"expected a number, got {cell!r}", lineno, column) from None


def _cells(cells: list[str], n: int, lineno: int) -> list[str]:
    if len(cells) > n and any(cells[n:]):
        raise ParseError(f"expected {n} columns, got {len(cells)}", lineno)
    if len(cells) < n:
        raise ParseError(f"expected {n} columns, got {len(cells)}", lineno)
    return cells[:n]


# --------------------------------------------------------------------------
# Norwegian series

GAMES_COLUMNS = ("host", "year", "events", "gold", "silver", "bronze", "total", "nations", "percent")


def parse_games_table(text: str) -> list[GamesRecord]:
    records: list[GamesRecord] = []
    seen: dict[int, int] = {}
    for lineno, cells in _data_lines(text):
        host, year, events, g, s, b, total, nations, percent = _cells(
            cells, len(GAMES_COLUMNS), lineno
        )
        year_i = _int(year, lineno, "year")
        if year_i in seen:
            raise IntegrityError(f"line {lineno}: duplicate year {year_i} (first on line {seen[year_i]})")
        if records and year_i < records[-1].year:
            raise IntegrityError(f"line {lineno}: year {year_i} out of order")
        seen[year_i] = lineno
        events_i = _count(events, lineno, "events")
        if events_i < 1:
            raise IntegrityError(f"line {lineno}: events must be at least 1")
        medals = MedalCounts(
            _count(g, lineno, "gold"), _count(s, lineno, "silver"), _count(b, lineno, "bronze")
        )
        total_i = _count(total, lineno, "total")
        if max(total_i, medals.total) > 3 * events_i:
            raise IntegrityError(f"line {lineno}: more medals than the {3 * events_i} available")
        records.append(
            GamesRecord(
                year=year_i,
                host=host,
                events=events_i,
                norway=medals,
                total=total_i,
                nations=_count(nations, lineno, "nations"),
                percent=_decimal(percent, lineno, "percent"),
            )
        )
    return records


def serialize_games_table(games: Iterable[GamesRecord]) -> str:
    lines = ["# " + "\t".join(GAMES_COLUMNS)]
    for r in games:
        lines.append(
            "\t".join(
                str(v)
                for v in (
                    r.host, r.year, r.events, r.norway.gold, r.norway.silver,
                    r.norway.bronze, r.total, r.nations, r.percent,
                )
            )
        )
    return "\n".join(lines) + "\n"


def validate_games(games: list[GamesRecord]) -> ValidationReport:
    report = ValidationReport()
    for r in games:
        report.add(f"{r.year} percent", r.percent, r.recomputed_percent)
        if not r.total_matches_counts:
            report.add(
                f"{r.year} total = gold+silver+bronze",
                r.norway.total,
                r.total,
                documented=True,
            )
    totals = historical_totals(games)
    if totals.medals != totals.medals_from_counts:
        report.notes.append(
            f"total column sums to {totals.medals} medals, gold+silver+bronze to"
            f" {totals.medals_from_counts}; the narrative figure is 447"
        )
    return report


@dataclass(frozen=True)
class HistoricalTotals:
    medals: int
    events: int
    percent: float
    medals_from_counts: int

    def __iter__(self):
        # unpacks as (medals, events, percent)
        return iter((self.medals, self.events, self.percent))


def historical_totals(games: Iterable[GamesRecord]) -> HistoricalTotals:
    """Medals and events summed over all Games.

    ``percent`` divides medals by events, not by the 3·events medal chances;
    that is how the headline "share of all medals" figure is formed.
    """
    games = list(games)
    medals = sum(r.total for r in games)
    events = sum(r.events for r in games)
    percent = 100.0 * medals / events if events else float("nan")
    return HistoricalTotals(medals, events, percent, sum(r.norway.total for r in games))


# --------------------------------------------------------------------------
# 2026 nation table

NATION_COLUMNS = ("rank", "code", "gold", "silver", "bronze", "total", "op", "op_rank")


def parse_nation_table(text: str) -> list[NationRow]:
    rows: list[NationRow] = []
    last_rank: int | None = None
    for lineno, cells in _data_lines(text):
        rank, code, g, s, b, total, op, op_rank = _cells(cells, len(NATION_COLUMNS), lineno)
        if not re.fullmatch(r"[A-Z]{3}", code):
            raise ParseError(f"nation code must be three capital letters, got {code!r}", lineno, "code")
        points_only = g == s == b == total == ""
        if points_only:
            medals = MedalCounts()
            rank_i = None
        else:
            medals = MedalCounts(
                _count(g, lineno, "gold"), _count(s, lineno, "silver"), _count(b, lineno, "bronze")
            )
            if _count(total, lineno, "total") != medals.total:
                raise IntegrityError(
                    f"line {lineno}: {code} total {total} != {medals.gold}+{medals.silver}+{medals.bronze}"
                )
            if rank == "":
                if last_rank is None:
                    raise ParseError("blank rank on the first ranked row", lineno, "rank")
                rank_i = last_rank
            else:
                rank_i = _int(rank, lineno, "rank")
            last_rank = rank_i
        points = _decimal(op, lineno, "op")
        if points < 0:
            raise IntegrityError(f"line {lineno}: negative Olympic Points {points}")
        if (points * 2) % 1 != 0:
            raise IntegrityError(f"line {lineno}: Olympic Points {points} not a multiple of 0.5")
        rows.append(NationRow(rank_i, code, medals, points, _int(op_rank, lineno, "op_rank")))
    return rows


def serialize_nation_table(rows: Iterable[NationRow]) -> str:
    lines = ["# " + "\t".join(NATION_COLUMNS)]
    prev = None
    for r in rows:
        if r.has_medals or r.rank is not None:
            rank = "" if r.rank == prev else str(r.rank)
            prev = r.rank
            m = r.medals
            cells = [rank, r.code, m.gold, m.silver, m.bronze, m.total]
        else:
            cells = ["", r.code, "", "", "", ""]
        lines.append("\t".join(str(c) for c in [*cells, r.olympic_points, r.op_rank]))
    return "\n".join(lines) + "\n"


def validate_totals(rows: list[NationRow], expected: dict | None = None) -> ValidationReport:
    """Check the column sums of a nation table against its printed totals row."""
    expected = NATION_TABLE_TOTALS if expected is None else expected
    report = ValidationReport()
    sums = {
        "gold": sum(r.medals.gold for r in rows),
        "silver": sum(r.medals.silver for r in rows),
        "bronze": sum(r.medals.bronze for r in rows),
        "total": sum(r.medals.total for r in rows),
        "op": sum((r.olympic_points for r in rows), Decimal(0)),
    }
    for key, want in expected.items():
        report.add(f"{key} column sum", want, sums[key])
    return report


def competition_ranks(values: list) -> list[int]:
    """Descending "1224" ranks: ties share the best position."""
    order = sorted(values, reverse=True)
    first = {}
    for i, v in enumerate(order, start=1):
        first.setdefault(v, i)
    return [first[v] for v in values]


def validate_op_ranks(rows: list[NationRow]) -> ValidationReport:
    """Recompute the Olympic Points ranking column.

    Disagreements are reported as documented notes: the printed column has
    known irregularities and is kept as printed.
    """
    report = ValidationReport()
    recomputed = competition_ranks([r.olympic_points for r in rows])
    for r, rank in zip(rows, recomputed):
        if r.op_rank != rank:
            report.add(f"{r.code} op_rank", rank, r.op_rank, documented=True)
    report.notes.append(f"{len(rows) - len(report.checks)}/{len(rows)} printed op_rank values recomputed exactly")
    return report


# --------------------------------------------------------------------------
# speedskating

_CELL = re.compile(r"(\d+)(?:\[([A-Z]{3})(?:=(\d+))?\])?")


def parse_speedskating(text: str, sex: Sex) -> SpeedskatingTable:
    if sex not in ("men", "ladies"):
        raise ValueError(f"sex must be 'men' or 'ladies', got {sex!r}")
    allowed: set[str] = set()
    for lineno, words in _directives(text):
        if words[:1] == ["allow-mismatch"] and len(words) == 2:
            allowed.add(words[1].upper())
        else:
            raise ParseError(f"unknown directive {' '.join(words)!r}", lineno)

    lines = _data_lines(text)
    try:
        lineno, header = next(lines)
        tot_lineno, totals = next(lines)
    except StopIteration:
        raise ParseError("need a nation-code row and a totals row") from None
    nations = tuple(c.upper() for c in header[1:] if c)
    if len(set(nations)) != len(nations):
        raise IntegrityError(f"line {lineno}: duplicate nation code")
    totals = _cells(totals, len(nations) + 1, tot_lineno)
    header_totals = {c: _count(t, tot_lineno, c) for c, t in zip(nations, totals[1:])}

    rows = []
    reassignments = []
    for lineno, cells in lines:
        if len(cells) > len(nations) + 1 and any(cells[len(nations) + 1 :]):
            raise ParseError(f"more cells than the {len(nations)} nations", lineno)
        cells = cells + [""] * (len(nations) + 1 - len(cells))
        year = _int(cells[0], lineno, "year")
        counts = []
        for code, cell in zip(nations, cells[1:]):
            if cell == "":
                counts.append(0)
                continue
            m = _CELL.fullmatch(cell)
            if not m:
                raise ParseError(f"bad cell {cell!r}", lineno, code)
            n = int(m.group(1))
            if m.group(2):
                moved = int(m.group(3)) if m.group(3) else n
                if moved > n:
                    raise IntegrityError(f"line {lineno}, {code}: reassigns {moved} of {n} medals")
                reassignments.append(Reassignment(year, code, m.group(2), moved))
            counts.append(n)
        if rows and year <= rows[-1][0]:
            raise IntegrityError(f"line {lineno}: year {year} duplicated or out of order")
        rows.append((year, tuple(counts)))

    table = SpeedskatingTable(
        sex, nations, header_totals, tuple(rows), tuple(reassignments), frozenset(allowed)
    )
    unexpected = sorted(set(table.mismatches()) - allowed)
    if unexpected:
        rows_sum, printed = table.mismatches()[unexpected[0]]
        raise IntegrityError(
            f"{sex} {unexpected[0]}: column sums to {rows_sum}, header total is {printed}"
            + (f" (also: {', '.join(unexpected[1:])})" if len(unexpected) > 1 else "")
        )
    return table


def aggregate_speedskating(
    men: SpeedskatingTable, ladies: SpeedskatingTable, mode: KorMode = "split"
) -> list[CombinedSpeedskatingRow]:
    """Men + ladies per nation, from the printed per-nation totals.

    In ``split`` mode medals flagged as won by another nation (``1[NKR]``)
    move to that nation; ``lumped`` keeps them where they were printed.
    Rows are ordered by total, descending.  Ties keep the order in which
    nations first appear: ladies columns (with split-off nations right after
    their host column), then nations with men's medals only.
    """
    if mode not in ("split", "lumped"):
        raise ValueError(f"mode must be 'split' or 'lumped', got {mode!r}")
    counts: dict[str, list[int]] = {}
    order: list[str] = []

    def bump(code: str, idx: int, n: int):
        if code not in counts:
            counts[code] = [0, 0]
            order.append(code)
        counts[code][idx] += n

    for idx, table in ((1, ladies), (0, men)):
        moved = {}
        if mode == "split":
            for r in table.reassignments:
                moved.setdefault(r.column, []).append(r)
        for code in table.nations:
            n = table.header_totals[code]
            for r in moved.get(code, ()):
                n -= r.count
            bump(code, idx, n)
            for r in moved.get(code, ()):
                bump(r.origin, idx, r.count)

    rows = [CombinedSpeedskatingRow(c, counts[c][0], counts[c][1]) for c in order]
    rows.sort(key=lambda r: -r.total)
    return rows


# --------------------------------------------------------------------------
# embedded data

DATA_FILES = {
    "games": "games_norway.tsv",
    "nations": "nations_2026.tsv",
    "men": "speedskating_men.tsv",
    "ladies": "speedskating_ladies.tsv",
    "populations": "populations_2018.tsv",
    "regress": "regress_demo.tsv",
}


def read_data(name: str, data_dir: str | Path | None = None) -> str:
    """Text of one data table, from ``data_dir`` or the embedded copy."""
    filename = DATA_FILES[name]
    if data_dir is not None:
        return (Path(data_dir) / filename).read_text(encoding="utf-8")
    return resources.files("medalstats").joinpath("data").joinpath(filename).read_text(encoding="utf-8")


def load_games(data_dir=None) -> list[GamesRecord]:
    return parse_games_table(read_data("games", data_dir))


def load_nations(data_dir=None) -> list[NationRow]:
    return parse_nation_table(read_data("nations", data_dir))


def load_speedskating(sex: Sex, data_dir=None) -> SpeedskatingTable:
    return parse_speedskating(read_data(sex, data_dir), sex)

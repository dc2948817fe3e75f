"""Scoring schemes over medal tables, tie-aware ranks and Spearman correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .dataset import MedalCounts, NationRow


@dataclass(frozen=True)
class ScoringScheme:
    """Points for placements 1 through 6."""

    name: str
    weights: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        if len(self.weights) != 6:
            raise ValueError(f"need six placement weights, got {len(self.weights)}")
        if any(w < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if any(a < b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be nonincreasing")
        if self.weights[0] <= 0:
            raise ValueError("the winner must score")


MEDALS = ScoringScheme("medals", (1, 1, 1, 0, 0, 0))
OLYMPIC_POINTS = ScoringScheme("op7", (7, 5, 4, 3, 2, 1))
FIBONACCI = ScoringScheme("fib13", (13, 8, 5, 3, 2, 1))
SCHEMES = {s.name: s for s in (MEDALS, OLYMPIC_POINTS, FIBONACCI)}


def score_medals(m: MedalCounts, scheme: ScoringScheme) -> float:
    """Score from medals alone; placements 4-6 are unknown and count zero."""
    w = scheme.weights
    return w[0] * m.gold + w[1] * m.silver + w[2] * m.bronze


def score_full(placements: Sequence[int], scheme: ScoringScheme) -> float:
    if len(placements) != 6:
        raise ValueError(f"need counts for six placements, got {len(placements)}")
    if any(c < 0 for c in placements):
        raise ValueError("placement counts must be nonnegative")
    return sum(c * w for c, w in zip(placements, scheme.weights))


@dataclass(frozen=True)
class RankEntry:
    code: str
    score: float
    rank: float


@dataclass(frozen=True)
class RankTable:
    entries: tuple[RankEntry, ...]

    def ranks(self) -> dict[str, float]:
        return {e.code: e.rank for e in self.entries}

    def codes(self) -> list[str]:
        return [e.code for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def rank_with_ties(scores: Iterable[tuple[str, float]]) -> RankTable:
    """Rank by descending score; a tied group shares the mean of the positions it spans.

    Entries come back in rank order, ties in input order.
    """
    scores = list(scores)
    if not scores:
        raise ValueError("nothing to rank")
    codes = [c for c, _ in scores]
    if len(set(codes)) != len(codes):
        raise ValueError("duplicate codes")
    order = sorted(range(len(scores)), key=lambda i: -scores[i][1])
    entries = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]][1] == scores[order[i]][1]:
            j += 1
        avg = (i + 1 + j + 1) / 2.0
        for k in order[i : j + 1]:
            entries.append(RankEntry(scores[k][0], scores[k][1], avg))
        i = j + 1
    return RankTable(tuple(entries))


def spearman_rho(x_ranks: RankTable, y_ranks: RankTable) -> float:
    """Pearson correlation of two rank vectors matched by nation code."""
    x, y = x_ranks.ranks(), y_ranks.ranks()
    if set(x) != set(y):
        diff = sorted(set(x) ^ set(y))
        raise ValueError(f"rank tables cover different nations: {', '.join(diff)}")
    if len(x) < 2:
        raise ValueError("need at least two nations")
    codes = sorted(x)
    a = [x[c] for c in codes]
    b = [y[c] for c in codes]
    ma = math.fsum(a) / len(a)
    mb = math.fsum(b) / len(b)
    da = [v - ma for v in a]
    db = [v - mb for v in b]
    sab = math.fsum(u * v for u, v in zip(da, db))
    saa = math.fsum(u * u for u in da)
    sbb = math.fsum(v * v for v in db)
    if saa == 0 or sbb == 0:
        raise ValueError("a ranking with every nation tied has no correlation")
    return max(-1.0, min(1.0, sab / math.sqrt(saa * sbb)))


# --------------------------------------------------------------------------
# the 2026 table


def nation_scores(
    rows: Sequence[NationRow], scheme: str | ScoringScheme, include_points_only: bool = False
) -> list[tuple[str, float]]:
    """(code, score) pairs under a named scheme.

    ``op7`` uses the printed Olympic Points, which include placements 4-6;
    other schemes score medals only.  Points-only nations are left out unless
    ``include_points_only`` is set, in which case they score zero medals.
    """
    name = scheme if isinstance(scheme, str) else scheme.name
    chosen = [r for r in rows if include_points_only or r.has_medals]
    if name == "op7":
        return [(r.code, float(r.olympic_points)) for r in chosen]
    scheme = SCHEMES[name] if isinstance(scheme, str) else scheme
    return [(r.code, float(score_medals(r.medals, scheme))) for r in chosen]


def scheme_correlation(
    rows: Sequence[NationRow], scheme: str, against: str = "medals", include_points_only: bool = False
) -> float:
    a = rank_with_ties(nation_scores(rows, scheme, include_points_only))
    b = rank_with_ties(nation_scores(rows, against, include_points_only))
    return spearman_rho(a, b)


# --------------------------------------------------------------------------
# per capita


@dataclass(frozen=True)
class PerCapitaEntry:
    code: str
    population: int
    medals: int
    inhabitants_per_medal: float | None

    @property
    def medals_per_million(self) -> float:
        return 1e6 * self.medals / self.population


def per_capita(code: str, population: int, medals: int) -> PerCapitaEntry:
    """Inhabitants per medal; ``None`` for a nation without medals."""
    if population <= 0:
        raise ValueError(f"population must be positive, got {population}")
    if medals < 0:
        raise ValueError(f"medals must be nonnegative, got {medals}")
    per = population / medals if medals else None
    return PerCapitaEntry(code, population, medals, per)


def parse_populations(text: str) -> list[tuple[str, int, int | None]]:
    """Rows of code, population and an optional medal count."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in line.split("\t")]
        if cells[0].lower() == "code":
            continue
        if len(cells) not in (2, 3):
            raise ValueError(f"line {lineno}: expected code, population[, medals]")
        try:
            pop = int(cells[1].replace(",", ""))
            medals = int(cells[2]) if len(cells) == 3 and cells[2] else None
        except ValueError:
            raise ValueError(f"line {lineno}: bad number in {line!r}") from None
        out.append((cells[0], pop, medals))
    return out

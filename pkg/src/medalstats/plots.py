"""Plain SVG line charts for the medal-share series and confidence curves.

Output is a fixed 800x500 viewport with linear axes, written as text so the
files are byte-stable and diffable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence
from xml.sax.saxutils import escape

from . import __version__

WIDTH, HEIGHT = 800, 500
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 45, 55

DEFAULT_COLORS = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b")
LINE_COLOR = "#1f77b4"

PlotKind = Literal["series_band", "confidence_curves"]
Points = Sequence[tuple[float, float]]


@dataclass
class PlotSpec:
    """What to draw.

    For ``series_band`` the series are ``estimate``, ``low`` and ``high`` as
    (year, fraction) points.  For ``confidence_curves`` each series is one
    curve of (p, cc) points.  ``level_line`` is a fraction: the average share
    for a series plot, the confidence level for curves.
    """

    kind: PlotKind
    title: str
    series: dict[str, Points]
    level_line: float | None = None
    output_path: str | None = None
    annotations: list[tuple[float, str]] = field(default_factory=list)
    colors: Sequence[str] = DEFAULT_COLORS

    def __post_init__(self):
        if self.kind not in ("series_band", "confidence_curves"):
            raise ValueError(f"unknown plot kind {self.kind!r}")
        if not self.series or not any(self.series.values()):
            raise ValueError("nothing to plot")
        if self.level_line is not None and not 0.0 < self.level_line < 1.0:
            raise ValueError("level_line must lie in (0, 1)")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 10))
        t += step
    return ticks


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _label(v: float) -> str:
    return f"{v:g}"


class _Frame:
    def __init__(self, xlim, ylim):
        self.x0, self.x1 = xlim
        self.y0, self.y1 = ylim

    def x(self, v: float) -> float:
        return LEFT + (v - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)

    def y(self, v: float) -> float:
        return HEIGHT - BOTTOM - (v - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)

    def path(self, pts: Points) -> str:
        return " ".join(f"{_fmt(self.x(a))},{_fmt(self.y(b))}" for a, b in pts)


def _axes(frame: _Frame, xlabel: str, ylabel: str, yscale: float) -> list[str]:
    out = []
    bx0, bx1 = frame.x(frame.x0), frame.x(frame.x1)
    by0, by1 = frame.y(frame.y0), frame.y(frame.y1)
    out.append(
        f'<rect x="{_fmt(bx0)}" y="{_fmt(by1)}" width="{_fmt(bx1 - bx0)}" height="{_fmt(by0 - by1)}"'
        ' fill="none" stroke="#444444"/>'
    )
    for t in nice_ticks(frame.x0, frame.x1):
        x = frame.x(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{_fmt(by0)}" x2="{_fmt(x)}" y2="{_fmt(by0 + 5)}" stroke="#444444"/>')
        out.append(f'<text x="{_fmt(x)}" y="{_fmt(by0 + 20)}" text-anchor="middle">{_label(t)}</text>')
    for t in nice_ticks(frame.y0, frame.y1):
        y = frame.y(t)
        out.append(f'<line x1="{_fmt(bx0 - 5)}" y1="{_fmt(y)}" x2="{_fmt(bx0)}" y2="{_fmt(y)}" stroke="#444444"/>')
        out.append(
            f'<text x="{_fmt(bx0 - 8)}" y="{_fmt(y + 4)}" text-anchor="end">{_label(round(t * yscale, 6))}</text>'
        )
    out.append(
        f'<text x="{_fmt((bx0 + bx1) / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{_fmt((by0 + by1) / 2)}" text-anchor="middle"'
        f' transform="rotate(-90 18 {_fmt((by0 + by1) / 2)})">{escape(ylabel)}</text>'
    )
    return out


def _series_band(spec: PlotSpec) -> list[str]:
    est = spec.series["estimate"]
    xs = [a for a, _ in est]
    top = max(b for _, b in [*est, *spec.series.get("high", [])])
    if spec.level_line is not None:
        top = max(top, spec.level_line)
    ymax = max(0.05, math.ceil(top * 100 / 5) * 5 / 100)
    frame = _Frame((min(xs) - 2, max(xs) + 2), (0.0, ymax))
    out = _axes(frame, "year", "percent of medals", 100.0)
    color = spec.colors[0]
    for name in ("low", "high"):
        if spec.series.get(name):
            out.append(
                f'<polyline class="band" points="{frame.path(spec.series[name])}" fill="none"'
                f' stroke="{color}" stroke-width="1" stroke-dasharray="2,3"/>'
            )
    out.append(
        f'<polyline class="estimate" points="{frame.path(est)}" fill="none" stroke="{color}" stroke-width="2"/>'
    )
    if spec.level_line is not None:
        y = frame.y(spec.level_line)
        out.append(
            f'<line class="level" x1="{_fmt(frame.x(frame.x0))}" y1="{_fmt(y)}" x2="{_fmt(frame.x(frame.x1))}"'
            f' y2="{_fmt(y)}" stroke="{LINE_COLOR}" stroke-width="1.5"/>'
        )
    return out


def _confidence_curves(spec: PlotSpec) -> list[str]:
    inside = [p for pts in spec.series.values() for p, c in pts if c <= 0.999]
    if not inside:
        inside = [p for pts in spec.series.values() for p, _ in pts]
    lo, hi = min(inside), max(inside)
    pad = 0.05 * (hi - lo or 1.0)
    frame = _Frame((max(0.0, lo - pad), min(1.0, hi + pad)), (0.0, 1.0))
    out = _axes(frame, "p", "confidence curve", 1.0)
    for i, (name, pts) in enumerate(spec.series.items()):
        color = spec.colors[i % len(spec.colors)]
        shown = [(p, c) for p, c in pts if frame.x0 <= p <= frame.x1]
        out.append(
            f'<polyline class="curve" data-name="{escape(name)}" points="{frame.path(shown)}"'
            f' fill="none" stroke="{color}" stroke-width="2"/>'
        )
        if shown:
            p, c = min(shown, key=lambda t: t[1])
            out.append(
                f'<text x="{_fmt(frame.x(p))}" y="{_fmt(frame.y(c) - 6)}" text-anchor="middle"'
                f' fill="{color}">{escape(name)}</text>'
            )
    if spec.level_line is not None:
        y = frame.y(spec.level_line)
        out.append(
            f'<line class="level" x1="{_fmt(frame.x(frame.x0))}" y1="{_fmt(y)}" x2="{_fmt(frame.x(frame.x1))}"'
            f' y2="{_fmt(y)}" stroke="{LINE_COLOR}" stroke-width="1" stroke-dasharray="4,3"/>'
        )
    for x, text in spec.annotations:
        if frame.x0 <= x <= frame.x1:
            out.append(
                f'<line class="endpoint" x1="{_fmt(frame.x(x))}" y1="{_fmt(frame.y(0))}"'
                f' x2="{_fmt(frame.x(x))}" y2="{_fmt(frame.y(spec.level_line or 0))}"'
                ' stroke="#888888" stroke-width="0.8"/>'
            )
            out.append(
                f'<text class="endpoint" x="{_fmt(frame.x(x))}" y="{_fmt(frame.y(0) - 4)}"'
                f' text-anchor="middle" font-size="9">{escape(text)}</text>'
            )
    return out


def render_svg(spec: PlotSpec) -> str:
    body = _series_band(spec) if spec.kind == "series_band" else _confidence_curves(spec)
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- medalstats {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}"'
        f' viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH // 2}" y="25" text-anchor="middle" font-size="15">{escape(spec.title)}</text>',
    ]
    return "\n".join([*head, *body, "</svg>"]) + "\n"


def write_svg(spec: PlotSpec, path: str | Path | None = None) -> Path:
    target = Path(path or spec.output_path or "plot.svg")
    target.write_text(render_svg(spec), encoding="utf-8")
    return target

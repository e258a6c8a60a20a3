"""Static SVG charts without a plotting dependency.

Line and scatter series on linear or log10 axes, with decade ticks on log
axes.  Output is plain SVG 1.1 markup with no timestamps or random ids, so
identical inputs render identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

WIDTH = 760
HEIGHT = 460
MARGIN_LEFT = 78
MARGIN_RIGHT = 24
MARGIN_TOP = 46
MARGIN_BOTTOM = 58


@dataclass
class Series:
    name: str
    points: list[tuple[float, float]]
    kind: str = "line"  # "line" | "scatter" | "both"
    color: str | None = None
    dash: str | None = None
    markers: list[tuple[float, float]] = field(default_factory=list)


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    else:
        step = 10.0 * mag
    first = math.ceil(lo / step) * step
    ticks = []
    value = first
    while value <= hi + step * 1e-9:
        ticks.append(round(value, 12))
        value += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    lo_exp = math.floor(math.log10(lo))
    hi_exp = math.ceil(math.log10(hi))
    return [10.0**e for e in range(int(lo_exp), int(hi_exp) + 1)]


def _fmt(value: float) -> str:
    if value == 0:
        return "0"
    if abs(value) >= 10000 or abs(value) < 0.01:
        return f"{value:.0e}".replace("e+0", "e").replace("e-0", "e-").replace("e+", "e")
    if value == int(value):
        return str(int(value))
    return f"{value:g}"


class _Axis:
    def __init__(self, lo: float, hi: float, log: bool, pixel_lo: float, pixel_hi: float):
        self.log = log
        if log:
            lo = max(lo, 1e-12)
            hi = max(hi, lo * 10)
            self.lo, self.hi = math.log10(lo), math.log10(hi)
        else:
            if hi <= lo:
                hi = lo + 1.0
            pad = 0.05 * (hi - lo)
            self.lo, self.hi = lo - pad, hi + pad
        self.pixel_lo = pixel_lo
        self.pixel_hi = pixel_hi

    def pixel(self, value: float) -> float:
        v = math.log10(value) if self.log else value
        frac = (v - self.lo) / (self.hi - self.lo)
        return self.pixel_lo + frac * (self.pixel_hi - self.pixel_lo)

    def ticks(self) -> list[float]:
        if self.log:
            return [t for t in _decade_ticks(10**self.lo, 10**self.hi)
                    if self.lo - 1e-9 <= math.log10(t) <= self.hi + 1e-9]
        return _nice_ticks(self.lo, self.hi)


def render_chart(
    title: str,
    x_label: str,
    y_label: str,
    series: list[Series],
    x_log: bool = False,
    y_log: bool = False,
    width: int = WIDTH,
    height: int = HEIGHT,
) -> str:
    """Render series to an SVG document string."""
    points = [
        (x, y)
        for s in series
        for x, y in list(s.points) + list(s.markers)
        if (not x_log or x > 0) and (not y_log or y > 0)
    ]
    if not points:
        points = [(1.0, 1.0), (10.0, 10.0)]
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x_axis = _Axis(min(xs), max(xs), x_log, MARGIN_LEFT, width - MARGIN_RIGHT)
    y_axis = _Axis(min(ys), max(ys), y_log, height - MARGIN_BOTTOM, MARGIN_TOP)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="15" font-weight="bold">{escape(title)}</text>',
    ]

    plot_left, plot_right = MARGIN_LEFT, width - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, height - MARGIN_BOTTOM
    for tick in x_axis.ticks():
        px = x_axis.pixel(tick)
        parts.append(
            f'<line x1="{px:.1f}" y1="{plot_top}" x2="{px:.1f}" y2="{plot_bottom}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{px:.1f}" y="{plot_bottom + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    for tick in y_axis.ticks():
        py = y_axis.pixel(tick)
        parts.append(
            f'<line x1="{plot_left}" y1="{py:.1f}" x2="{plot_right}" y2="{py:.1f}" '
            'stroke="#dddddd" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{plot_left - 6}" y="{py + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{_fmt(tick)}</text>'
        )
    parts.append(
        f'<rect x="{plot_left}" y="{plot_top}" width="{plot_right - plot_left}" '
        f'height="{plot_bottom - plot_top}" fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{(plot_left + plot_right) / 2:.1f}" y="{height - 14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{escape(x_label)}</text>'
    )
    parts.append(
        f'<text x="20" y="{(plot_top + plot_bottom) / 2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 20 {(plot_top + plot_bottom) / 2:.1f})">{escape(y_label)}</text>'
    )

    for idx, s in enumerate(series):
        color = s.color or PALETTE[idx % len(PALETTE)]
        visible = [
            (x, y) for x, y in s.points if (not x_log or x > 0) and (not y_log or y > 0)
        ]
        if s.kind in ("line", "both") and len(visible) >= 2:
            coords = " ".join(
                f"{x_axis.pixel(x):.2f},{y_axis.pixel(y):.2f}" for x, y in visible
            )
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"{dash}><title>{escape(s.name)}</title></polyline>'
            )
        if s.kind in ("scatter", "both"):
            for x, y in visible:
                parts.append(
                    f'<circle cx="{x_axis.pixel(x):.2f}" cy="{y_axis.pixel(y):.2f}" r="3.2" '
                    f'fill="{color}" fill-opacity="0.75"><title>{escape(s.name)}</title></circle>'
                )
        for x, y in s.markers:
            if (x_log and x <= 0) or (y_log and y <= 0):
                continue
            px, py = x_axis.pixel(x), y_axis.pixel(y)
            parts.append(
                f'<path d="M {px:.2f} {py - 5:.2f} L {px + 5:.2f} {py:.2f} '
                f'L {px:.2f} {py + 5:.2f} L {px - 5:.2f} {py:.2f} Z" fill="{color}" '
                f'stroke="#333333" stroke-width="0.7"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

"""Bare-bones SVG line and scatter plots (axes, ticks, legend)."""

from __future__ import annotations

import math
from html import escape
from typing import Mapping, Sequence

W, H = 640, 420
ML, MR, MT, MB = 70, 150, 40, 55
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

Series = Mapping[str, Sequence[tuple[float, float]]]


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    start = math.ceil(lo / step) * step
    out = []
    t = start
    while t <= hi + 1e-9 * step:
        out.append(round(t, 10))
        t += step
    return out


def _bounds(series: Series):
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    if not xs:
        return 0.0, 1.0, 0.0, 1.0
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y0 == y1:
        y0, y1 = y0 - 1, y1 + 1
    pad = 0.05 * (y1 - y0)
    return x0, x1, y0 - pad, y1 + pad


def plot(series: Series, *, title: str, xlabel: str, ylabel: str, lines: bool = True) -> str:
    x0, x1, y0, y1 = _bounds(series)
    pw, ph = W - ML - MR, H - MT - MB

    def sx(x):
        return ML + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MT + ph - (y - y0) / (y1 - y0) * ph

    el = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
          f'font-family="sans-serif" font-size="11">',
          f'<rect width="{W}" height="{H}" fill="white"/>',
          f'<text x="{ML + pw / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
          f'<rect x="{ML}" y="{MT}" width="{pw}" height="{ph}" fill="none" stroke="black"/>']
    for t in _ticks(x0, x1):
        el.append(f'<line x1="{sx(t):.1f}" y1="{MT + ph}" x2="{sx(t):.1f}" y2="{MT + ph + 4}" stroke="black"/>')
        el.append(f'<text x="{sx(t):.1f}" y="{MT + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        el.append(f'<line x1="{ML - 4}" y1="{sy(t):.1f}" x2="{ML}" y2="{sy(t):.1f}" stroke="black"/>')
        el.append(f'<text x="{ML - 6}" y="{sy(t) + 4:.1f}" text-anchor="end">{t:g}</text>')
    if y0 < 0 < y1:
        el.append(f'<line x1="{ML}" y1="{sy(0):.1f}" x2="{ML + pw}" y2="{sy(0):.1f}" '
                  f'stroke="#999" stroke-dasharray="4,3"/>')
    el.append(f'<text x="{ML + pw / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    el.append(f'<text x="16" y="{MT + ph / 2}" text-anchor="middle" '
              f'transform="rotate(-90 16 {MT + ph / 2})">{escape(ylabel)}</text>')

    for i, (name, pts) in enumerate(series.items()):
        color = COLORS[i % len(COLORS)]
        pts = sorted(pts) if lines else list(pts)
        if lines and len(pts) > 1:
            d = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in pts)
            el.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            el.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3" fill="{color}"/>')
        ly = MT + 14 * i + 8
        el.append(f'<circle cx="{W - MR + 14}" cy="{ly}" r="4" fill="{color}"/>')
        el.append(f'<text x="{W - MR + 24}" y="{ly + 4}">{escape(name)}</text>')
    el.append("</svg>")
    return "\n".join(el) + "\n"

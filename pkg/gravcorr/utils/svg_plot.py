"""
Static SVG line charts of CSV columns.

Coordinates are printed with fixed precision and no timestamps or random ids
are emitted, so identical input renders identical bytes.
"""
import logging
import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
from xml.sax.saxutils import escape

import numpy as np

from gravcorr.errors import UsageError
from gravcorr.utils.atomic_file import write_text_atomic

logger = logging.getLogger(__name__)

# ==================== LAYOUT ====================

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 170, 30, 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return format(v, ".4g")


class Axis:
    """Maps data values to pixels on a linear or base-10 logarithmic scale."""

    def __init__(self, lo: float, hi: float, log: bool, pixel_lo: float, pixel_hi: float):
        self.log = log
        if log:
            lo, hi = math.log10(lo), math.log10(hi)
        if hi <= lo:
            lo, hi = lo - 0.5, hi + 0.5
        self.lo, self.hi = lo, hi
        self.pixel_lo, self.pixel_hi = pixel_lo, pixel_hi

    def __call__(self, value: float) -> float:
        v = math.log10(value) if self.log else value
        return self.pixel_lo + (v - self.lo) / (self.hi - self.lo) * (self.pixel_hi - self.pixel_lo)

    def ticks(self) -> List[float]:
        if self.log:
            first, last = math.ceil(self.lo - 1e-12), math.floor(self.hi + 1e-12)
            if last < first:
                return [10.0 ** self.lo, 10.0 ** self.hi]
            step = max(1, math.ceil((last - first + 1) / 8))
            return [10.0 ** k for k in range(first, last + 1, step)]
        return [float(v) for v in np.linspace(self.lo, self.hi, 6)]


def _plottable(x: Sequence[Optional[float]], y: Sequence[Optional[float]],
               log_x: bool, log_y: bool) -> List[Tuple[float, float]]:
    points = []
    for xv, yv in zip(x, y):
        if xv is None or yv is None or not (math.isfinite(xv) and math.isfinite(yv)):
            continue
        if (log_x and xv <= 0.0) or (log_y and yv <= 0.0):
            continue
        points.append((xv, yv))
    return points


def render_svg(x: Sequence[Optional[float]], series: Dict[str, Sequence[Optional[float]]],
               x_label: str = "tau", log_x: bool = False, log_y: bool = False,
               title: Optional[str] = None) -> str:
    """
    Render one polyline per entry of ``series`` against ``x``.

    Args:
        x: Abscissa values; None cells are skipped
        series: Column name -> ordinate values, in legend order
        x_label: Horizontal axis label
        log_x: Base-10 logarithmic abscissa (non-positive points dropped)
        log_y: Base-10 logarithmic ordinate (non-positive points dropped)
        title: Optional chart title

    Returns:
        str: complete SVG document

    Raises:
        UsageError: if a column has no plottable points
    """
    curves = {}
    for name, values in series.items():
        points = _plottable(x, values, log_x, log_y)
        if not points:
            raise UsageError(f"Column {name!r} has no plottable values"
                             f"{' on a log axis' if log_x or log_y else ''}", {"column": name})
        curves[name] = points

    xs = [p[0] for pts in curves.values() for p in pts]
    ys = [p[1] for pts in curves.values() for p in pts]
    x_axis = Axis(min(xs), max(xs), log_x, MARGIN_LEFT, WIDTH - MARGIN_RIGHT)
    y_axis = Axis(min(ys), max(ys), log_y, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP)
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{left}" y="{top}" width="{right - left}" height="{bottom - top}" '
        f'fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{_fmt((left + right) / 2)}" y="{top - 10}" text-anchor="middle">'
                   f'{escape(title)}</text>')

    for t in x_axis.ticks():
        px = _fmt(x_axis(t))
        out.append(f'<line x1="{px}" y1="{bottom}" x2="{px}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{px}" y="{bottom + 18}" text-anchor="middle">{_tick_label(t)}</text>')
    for t in y_axis.ticks():
        py = _fmt(y_axis(t))
        out.append(f'<line x1="{left - 5}" y1="{py}" x2="{left}" y2="{py}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py}" text-anchor="end" dominant-baseline="middle">'
                   f'{_tick_label(t)}</text>')

    out.append(f'<text x="{_fmt((left + right) / 2)}" y="{HEIGHT - 15}" text-anchor="middle">'
               f'{escape(x_label)}{" (log)" if log_x else ""}</text>')
    y_label = ", ".join(curves) + (" (log)" if log_y else "")
    out.append(f'<text x="20" y="{_fmt((top + bottom) / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 20 {_fmt((top + bottom) / 2)})">{escape(y_label)}</text>')

    for i, (name, points) in enumerate(curves.items()):
        colour = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(x_axis(px))},{_fmt(y_axis(py))}" for px, py in points)
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{coords}"/>')
        ly = top + 20 * i + 10
        out.append(f'<line x1="{right + 15}" y1="{ly}" x2="{right + 40}" y2="{ly}" '
                   f'stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{right + 46}" y="{ly}" dominant-baseline="middle">{escape(name)}</text>')

    out.append('</svg>')
    return "\n".join(out) + "\n"


def write_svg(path: Union[str, Path], x: Sequence[Optional[float]],
              series: Dict[str, Sequence[Optional[float]]], **kwargs) -> None:
    write_text_atomic(path, render_svg(x, series, **kwargs))
    logger.info(f"✅ Wrote {len(series)}-curve chart to {path}")

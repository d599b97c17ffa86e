"""Self-contained SVG rendering of spur charts (inline styles, no fonts)."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .scan import ChartData

CLASS_COLORS = {
    "Desired": "#d62728",    # red
    "Critical": "#1f77b4",   # blue
    "Moderate": "#e6b400",   # yellow
    "NonImpact": "#2ca02c",  # green
}


@dataclass(frozen=True)
class SvgStyle:
    width: int = 960
    height: int = 600
    margin: int = 70
    if_band: tuple[float, float] | None = None
    title: str | None = None


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(t)
        t += step
    return ticks


def render_svg(chart: ChartData, style: SvgStyle | None = None) -> str:
    """One class-colored polyline per chart line; axes in MHz, or as LO
    ratios for normalized charts; optional IF-band rectangle overlay."""
    if not chart.lines:
        raise ValueError("chart has no lines to render")
    style = style or SvgStyle()
    w, h, m = style.width, style.height, style.margin

    unit = 1.0 if chart.normalized else 1e6
    x_lo = chart.rf_range.low_hz / (chart.lo_hz if chart.normalized else 1.0) / unit
    x_hi = chart.rf_range.high_hz / (chart.lo_hz if chart.normalized else 1.0) / unit
    ys = [y / unit for line in chart.lines for _, y in line.vertices]
    if style.if_band is not None:
        ys.extend(v / unit for v in style.if_band)
    y_lo = 0.0
    y_hi = max(ys) * 1.05 or 1.0

    def sx(x: float) -> float:
        return m + (x - x_lo) / (x_hi - x_lo) * (w - 2 * m)

    def sy(y: float) -> float:
        return h - m - (y - y_lo) / (y_hi - y_lo) * (h - 2 * m)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    if style.title:
        parts.append(
            f'<text x="{w / 2:.1f}" y="{m / 2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="16">{style.title}</text>')

    # axes and grid
    axis = '#333333'
    parts.append(f'<line x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="{axis}"/>')
    parts.append(f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h - m}" stroke="{axis}"/>')
    for t in _ticks(x_lo, x_hi):
        px = sx(t)
        parts.append(f'<line x1="{px:.1f}" y1="{h - m}" x2="{px:.1f}" y2="{h - m + 5}" stroke="{axis}"/>')
        parts.append(f'<text x="{px:.1f}" y="{h - m + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{t:g}</text>')
    for t in _ticks(y_lo, y_hi):
        py = sy(t)
        parts.append(f'<line x1="{m - 5}" y1="{py:.1f}" x2="{m}" y2="{py:.1f}" stroke="{axis}"/>')
        parts.append(f'<text x="{m - 8}" y="{py + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">{t:g}</text>')
    x_label = "f_in / f_LO" if chart.normalized else "mixer input (MHz)"
    y_label = "f_out / f_LO" if chart.normalized else "mixer output (MHz)"
    parts.append(f'<text x="{w / 2:.1f}" y="{h - m / 4:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{x_label}</text>')
    parts.append(f'<text x="{m / 3:.1f}" y="{h / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 {m / 3:.1f} {h / 2:.1f})">{y_label}</text>')

    if style.if_band is not None:
        b_lo, b_hi = (v / unit for v in style.if_band)
        parts.append(
            f'<rect class="if-band" x="{sx(x_lo):.1f}" y="{sy(b_hi):.1f}" '
            f'width="{sx(x_hi) - sx(x_lo):.1f}" height="{sy(b_lo) - sy(b_hi):.1f}" '
            f'fill="#2ca02c" fill-opacity="0.15" stroke="#000000" stroke-dasharray="4 3"/>')

    for line in chart.lines:
        color = CLASS_COLORS[line.spur_class.value]
        width = 2.5 if line.spur_class.value == "Desired" else 1.5
        pts = " ".join(f"{sx(x / unit):.2f},{sy(y / unit):.2f}" for x, y in line.vertices)
        label = f"({line.m},{line.n},{line.sign.value}) {line.spur_class.value}"
        if line.suppression_db is not None:
            label += f" {line.suppression_db:g} dB"
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"><title>{label}</title></polyline>')

    # legend
    lx, ly = w - m - 130, m + 10
    for i, (name, color) in enumerate(CLASS_COLORS.items()):
        parts.append(f'<line x1="{lx}" y1="{ly + 16 * i}" x2="{lx + 22}" '
                     f'y2="{ly + 16 * i}" stroke="{color}" stroke-width="3"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly + 16 * i + 4}" '
                     f'font-family="sans-serif" font-size="11">{name}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"

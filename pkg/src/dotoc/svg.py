"""Self-contained deterministic SVG rendering (no plotting dependencies).

Heatmaps become colored cell grids with a viridis-like ramp; tables with an
x column and one or more y columns become line plots, optionally log-log.
All coordinates and labels use fixed format strings so identical input
yields identical bytes.
"""

import math
import os

import numpy as np

from .otoc import HeatmapSeries

_VIRIDIS = [
    (0x44, 0x01, 0x54),
    (0x46, 0x32, 0x7E),
    (0x36, 0x5C, 0x8D),
    (0x27, 0x7F, 0x8E),
    (0x1F, 0xA1, 0x87),
    (0x4A, 0xC1, 0x6D),
    (0xA0, 0xDA, 0x39),
    (0xFD, 0xE7, 0x25),
]
_NA_COLOR = "#cccccc"


def _ramp(u: float) -> str:
    u = min(max(u, 0.0), 1.0)
    x = u * (len(_VIRIDIS) - 1)
    i = min(int(x), len(_VIRIDIS) - 2)
    frac = x - i
    lo, hi = _VIRIDIS[i], _VIRIDIS[i + 1]
    rgb = tuple(round(a + frac * (b - a)) for a, b in zip(lo, hi))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _svg_header(width: int, height: int) -> list:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]


def render_heatmap_svg(series: HeatmapSeries, path: str, title: str | None = None) -> str:
    times = series.times
    sites = series.sites
    vals = series.values
    finite = vals[np.isfinite(vals)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    span = hi - lo if hi > lo else 1.0

    ml, mt, mr, mb = 60, 30, 70, 45
    cw = max(2, min(12, 700 // max(len(times), 1)))
    chh = max(10, min(30, 360 // max(len(sites), 1)))
    pw, ph = cw * len(times), chh * len(sites)
    width, height = ml + pw + mr, mt + ph + mb
    out = _svg_header(width, height)
    out.append(f'<text x="{ml}" y="18">{title or series.label}</text>')

    for i in range(len(times)):
        for j in range(len(sites)):
            v = vals[i, j]
            color = _NA_COLOR if not math.isfinite(v) else _ramp((v - lo) / span)
            x = ml + i * cw
            y = mt + j * chh
            out.append(f'<rect x="{x}" y="{y}" width="{cw}" height="{chh}" fill="{color}"/>')

    # axes
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    n_ticks = min(6, len(times))
    for k in range(n_ticks):
        i = k * (len(times) - 1) // max(n_ticks - 1, 1)
        x = ml + i * cw + cw // 2
        out.append(f'<line x1="{x}" y1="{mt + ph}" x2="{x}" y2="{mt + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{mt + ph + 16}" text-anchor="middle">{times[i]:.6g}</text>')
    for j, site in enumerate(sites):
        y = mt + j * chh + chh // 2 + 4
        out.append(f'<text x="{ml - 6}" y="{y}" text-anchor="end">{site}</text>')
    out.append(f'<text x="{ml + pw // 2}" y="{height - 8}" text-anchor="middle">t</text>')
    out.append(f'<text x="14" y="{mt + ph // 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {mt + ph // 2})">site</text>')

    # color legend
    lx = ml + pw + 18
    steps = 32
    lh = ph / steps
    for k in range(steps):
        u = 1.0 - (k + 0.5) / steps
        out.append(f'<rect x="{lx}" y="{mt + k * lh:.2f}" width="12" height="{lh + 0.5:.2f}" '
                   f'fill="{_ramp(u)}"/>')
    out.append(f'<text x="{lx + 16}" y="{mt + 10}">{hi:.6g}</text>')
    out.append(f'<text x="{lx + 16}" y="{mt + ph}">{lo:.6g}</text>')
    out.append("</svg>")
    with open(path + ".tmp", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    os.replace(path + ".tmp", path)
    return path


def render_line_svg(xs, ys_list, labels, path: str, xlabel: str = "x", ylabel: str = "y",
                    loglog: bool = False, title: str = "") -> str:
    """Line plot of one or more series over common x values."""
    palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    xs = np.asarray(xs, dtype=float)
    series = [np.asarray(y, dtype=float) for y in ys_list]
    if loglog:
        fx = np.log10(xs)
        fys = [np.log10(np.where(y > 0, y, np.nan)) for y in series]
    else:
        fx = xs
        fys = series
    finite_parts = [f[np.isfinite(f)] for f in fys]
    allf = np.concatenate(finite_parts) if finite_parts else np.array([])
    fin_x = fx[np.isfinite(fx)]
    x_lo, x_hi = (float(fin_x.min()), float(fin_x.max())) if fin_x.size else (0.0, 1.0)
    y_lo, y_hi = (float(allf.min()), float(allf.max())) if allf.size else (0.0, 1.0)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    ml, mt, mr, mb = 70, 30, 20, 50
    pw, ph = 520, 340
    width, height = ml + pw + mr, mt + ph + mb

    def px(v):
        return ml + (v - x_lo) / (x_hi - x_lo) * pw

    def py(v):
        return mt + ph - (v - y_lo) / (y_hi - y_lo) * ph

    out = _svg_header(width, height)
    out.append(f'<text x="{ml}" y="18">{title}</text>')
    out.append(f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for k in range(5):
        vx = x_lo + k * (x_hi - x_lo) / 4
        vy = y_lo + k * (y_hi - y_lo) / 4
        tx = 10 ** vx if loglog else vx
        ty = 10 ** vy if loglog else vy
        out.append(f'<line x1="{px(vx):.2f}" y1="{mt + ph}" x2="{px(vx):.2f}" '
                   f'y2="{mt + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{px(vx):.2f}" y="{mt + ph + 16}" text-anchor="middle">{tx:.4g}</text>')
        out.append(f'<line x1="{ml - 4}" y1="{py(vy):.2f}" x2="{ml}" y2="{py(vy):.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 6}" y="{py(vy) + 4:.2f}" text-anchor="end">{ty:.4g}</text>')
    out.append(f'<text x="{ml + pw // 2}" y="{height - 10}" text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="16" y="{mt + ph // 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {mt + ph // 2})">{ylabel}</text>')

    for s, (fy, label) in enumerate(zip(fys, labels)):
        color = palette[s % len(palette)]
        pts = [(px(a), py(b)) for a, b in zip(fx, fy) if math.isfinite(a) and math.isfinite(b)]
        if len(pts) > 1:
            d = " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for a, b in pts:
            out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2.5" fill="{color}"/>')
        out.append(f'<text x="{ml + pw - 6}" y="{mt + 14 + 13 * s}" text-anchor="end" '
                   f'fill="{color}">{label}</text>')
    out.append("</svg>")
    with open(path + ".tmp", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
    os.replace(path + ".tmp", path)
    return path


def render_svg(obj, path: str, **kwargs) -> str:
    """Dispatch: HeatmapSeries -> cell grid, Table -> line plot."""
    from .csvio import Table

    if isinstance(obj, HeatmapSeries):
        return render_heatmap_svg(obj, path, **kwargs)
    if isinstance(obj, Table):
        xs = [row[0] for row in obj.rows]
        ys_list = [[row[j] for row in obj.rows] for j in range(1, len(obj.columns))]
        return render_line_svg(
            xs, ys_list, obj.columns[1:], path,
            xlabel=obj.columns[0], ylabel=obj.label, **kwargs,
        )
    raise TypeError(f"cannot render {type(obj).__name__}")

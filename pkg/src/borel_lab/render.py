"""Plain SVG output: polygon boundaries and theta-summability maps."""

from __future__ import annotations

import math

SIZE = 480
MARGIN = 20

_STATUS_COLOR = {"summable": "#2a9d4b", "divergent": "#c0392b", "inconclusive": "#e0a800"}


def _num(x):
    return format(float(x), ".6g")


def _frame(window):
    x0, x1, y0, y1 = map(float, window)
    span = max(x1 - x0, y1 - y0)
    scale = (SIZE - 2 * MARGIN) / span

    def to_px(x, y):
        return MARGIN + (x - x0) * scale, SIZE - MARGIN - (y - y0) * scale

    return to_px


def _header(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]


def polygon_svg(segments, window, singularities=(), title="Borel polygon") -> str:
    """Boundary segments (from :func:`polygon.boundary_segments`) plus axes and marked singularities."""
    to_px = _frame(window)
    x0, x1, y0, y1 = map(float, window)
    out = _header(title)
    ax = []
    if x0 <= 0 <= x1:
        ax.append((to_px(0, y0), to_px(0, y1)))
    if y0 <= 0 <= y1:
        ax.append((to_px(x0, 0), to_px(x1, 0)))
    for (a, b), (c, d) in ax:
        out.append(f'<line x1="{_num(a)}" y1="{_num(b)}" x2="{_num(c)}" y2="{_num(d)}" stroke="#bbbbbb" stroke-width="1"/>')
    path = []
    for (xa, ya), (xb, yb) in segments:
        pa, pb = to_px(xa, ya), to_px(xb, yb)
        path.append(f"M{_num(pa[0])} {_num(pa[1])}L{_num(pb[0])} {_num(pb[1])}")
    if path:
        out.append(f'<path class="boundary" d="{"".join(path)}" stroke="#1f4e9c" stroke-width="1.5" fill="none"/>')
    for z in singularities:
        z = complex(z)
        if x0 <= z.real <= x1 and y0 <= z.imag <= y1:
            px, py = to_px(z.real, z.imag)
            out.append(f'<circle cx="{_num(px)}" cy="{_num(py)}" r="3" fill="#c0392b"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def theta_map_svg(report, title=None) -> str:
    """One dot per probed direction on the circle, colored by verdict status."""
    title = title or f"circle sweep r={report.r:g}"
    out = _header(title)
    c = SIZE / 2
    R = SIZE / 2 - 2 * MARGIN
    out.append(f'<circle cx="{_num(c)}" cy="{_num(c)}" r="{_num(R)}" stroke="#bbbbbb" fill="none"/>')
    for theta, v in zip(report.thetas, report.verdicts):
        x = c + R * math.cos(theta)
        y = c - R * math.sin(theta)
        color = _STATUS_COLOR[v.status.value]
        out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="5" fill="{color}"><title>{theta:.6f} {v.status.value}</title></circle>')
    state = "uniform" if report.uniform else "not uniform"
    out.append(f'<text x="{MARGIN}" y="{SIZE - 6}" font-family="monospace" font-size="12">{state}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

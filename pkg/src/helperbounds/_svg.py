"""Minimal self-contained SVG rendering of rate-region boundaries.

Hand-rolled on purpose: the output must be byte-deterministic and free of
tool-version metadata.  Styling is not contractual; the numbers live in the
CSV/JSON outputs.
"""

import math

from .model import RegionBoundary

_W, _H = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 55

_STYLES = (
    ("outer bound", "#1f77b4", "none"),
    ("inner bound", "#d62728", "none"),
    ("time sharing", "#2ca02c", "6 4"),
)


def _nice_step(span: float) -> float:
    if span <= 0.0:
        return 1.0
    raw = span / 5.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            return mult * mag
    return 10.0 * mag


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def region_svg(outer: RegionBoundary, inner: RegionBoundary,
               ts: RegionBoundary, unit: str, scale: float) -> str:
    """Overlay the three boundaries; ``scale`` converts bits to the unit."""
    curves = [outer, inner, ts]
    x_max = max(b.r1_max for b in curves) * scale
    y_max = max(b.r2_max for b in curves) * scale
    x_max = max(x_max, 1e-9) * 1.08
    y_max = max(y_max, 1e-9) * 1.08

    def px(x):
        return _ML + (x / x_max) * (_W - _ML - _MR)

    def py(y):
        return _H - _MB - (y / y_max) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_ML}" y1="{py(0)}" x2="{_W - _MR}" y2="{py(0)}" stroke="black"/>',
        f'<line x1="{_ML}" y1="{py(0)}" x2="{_ML}" y2="{_MT}" stroke="black"/>',
    ]

    step_x, step_y = _nice_step(x_max), _nice_step(y_max)
    t = step_x
    while t <= x_max:
        parts.append(f'<line x1="{_fmt(px(t))}" y1="{py(0)}" x2="{_fmt(px(t))}" '
                     f'y2="{py(0) + 5}" stroke="black"/>')
        parts.append(f'<text x="{_fmt(px(t))}" y="{py(0) + 18}" font-size="11" '
                     f'text-anchor="middle">{_fmt(t)}</text>')
        t += step_x
    t = step_y
    while t <= y_max:
        parts.append(f'<line x1="{_ML - 5}" y1="{_fmt(py(t))}" x2="{_ML}" '
                     f'y2="{_fmt(py(t))}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 8}" y="{_fmt(py(t) + 4)}" font-size="11" '
                     f'text-anchor="end">{_fmt(t)}</text>')
        t += step_y

    parts.append(f'<text x="{(_ML + _W - _MR) // 2}" y="{_H - 15}" font-size="13" '
                 f'text-anchor="middle">R1 [{unit}/use]</text>')
    parts.append(f'<text x="16" y="{(_MT + _H - _MB) // 2}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 {(_MT + _H - _MB) // 2})">'
                 f'R2 [{unit}/use]</text>')

    for boundary, (label, color, dash) in zip(curves, _STYLES):
        pts = [(0.0, boundary.r2_max * scale)]
        pts += [(p.r1 * scale, p.r2 * scale) for p in boundary.points]
        pts.append((boundary.r1_max * scale, 0.0))
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
        dash_attr = f' stroke-dasharray="{dash}"' if dash != "none" else ""
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" '
                     f'stroke-width="1.8"{dash_attr}/>')

    for i, (label, color, dash) in enumerate(_STYLES):
        y = _MT + 16 + 18 * i
        parts.append(f'<line x1="{_W - 180}" y1="{y}" x2="{_W - 150}" y2="{y}" '
                     f'stroke="{color}" stroke-width="1.8"'
                     + (f' stroke-dasharray="{dash}"' if dash != "none" else "") + '/>')
        parts.append(f'<text x="{_W - 144}" y="{y + 4}" font-size="12">{label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"

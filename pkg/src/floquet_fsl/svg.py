"""Bare-bones SVG output: a line plot and a heatmap, no plotting dependency."""

from __future__ import annotations

import numpy as np

W, H, PAD = 640, 400, 50
_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _scale(v, lo, hi, a, b):
    if hi == lo:
        return (a + b) / 2 + 0 * v
    return a + (v - lo) / (hi - lo) * (b - a)


def _frame(title: str, xlabel: str, ylabel: str, xr, yr) -> list:
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">',
        f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" fill="none" stroke="black"/>',
        f'<text x="{W / 2}" y="{PAD / 2}" text-anchor="middle">{title}</text>',
        f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle">{xlabel}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" transform="rotate(-90 14 {H / 2})">{ylabel}</text>',
        f'<text x="{PAD}" y="{H - PAD + 15}" text-anchor="middle">{xr[0]:.3g}</text>',
        f'<text x="{W - PAD}" y="{H - PAD + 15}" text-anchor="middle">{xr[1]:.3g}</text>',
        f'<text x="{PAD - 5}" y="{H - PAD}" text-anchor="end">{yr[0]:.3g}</text>',
        f'<text x="{PAD - 5}" y="{PAD + 10}" text-anchor="end">{yr[1]:.3g}</text>',
    ]
    return out


def line_plot(x, series: dict, title: str = "", xlabel: str = "t", ylabel: str = "") -> str:
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([y[np.isfinite(y)] for y in ys.values()] or [np.zeros(1)])
    xr = (float(x.min()), float(x.max()))
    yr = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    out = _frame(title, xlabel, ylabel, xr, yr)
    for n, (name, y) in enumerate(ys.items()):
        ok = np.isfinite(y)
        px = _scale(x[ok], *xr, PAD, W - PAD)
        py = _scale(y[ok], *yr, H - PAD, PAD)
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        c = _COLOURS[n % len(_COLOURS)]
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1" points="{pts}"/>')
        out.append(f'<text x="{W - PAD + 4}" y="{PAD + 14 * (n + 1)}" fill="{c}" font-size="10">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _colour(v: float) -> str:
    # white -> dark blue ramp
    v = min(1.0, max(0.0, v)) if np.isfinite(v) else 0.0
    r = int(255 * (1 - v))
    g = int(255 * (1 - 0.7 * v))
    return f"#{r:02x}{g:02x}ff"


def heatmap(x, y, Z, title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    """Z[i, j] drawn at (x[j], y[i]); NaN cells stay white."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    Z = np.asarray(Z, dtype=float)
    fin = Z[np.isfinite(Z)]
    lo, hi = (float(fin.min()), float(fin.max())) if fin.size else (0.0, 1.0)
    out = _frame(title, xlabel, ylabel, (x.min(), x.max()), (y.min(), y.max()))
    cw = (W - 2 * PAD) / Z.shape[1]
    ch = (H - 2 * PAD) / Z.shape[0]
    for i in range(Z.shape[0]):
        for j in range(Z.shape[1]):
            v = (Z[i, j] - lo) / (hi - lo) if hi > lo else 0.5
            out.append(
                f'<rect x="{PAD + j * cw:.2f}" y="{H - PAD - (i + 1) * ch:.2f}" width="{cw:.2f}" height="{ch:.2f}" fill="{_colour(v)}"/>'
            )
    out.append(f'<text x="{W - PAD + 4}" y="{PAD + 10}" font-size="10">max {hi:.3g}</text>')
    out.append(f'<text x="{W - PAD + 4}" y="{H - PAD}" font-size="10">min {lo:.3g}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

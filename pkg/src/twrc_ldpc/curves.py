"""Self-contained SVG emission of BER-versus-E_b/N_0 comparison curves.

Hand-rolled rather than delegated to a plotting package so the output is
byte-deterministic and the plotted markers/paths stay trivially inspectable.
"""

from __future__ import annotations

import math

__all__ = ["BER_FLOOR", "emit_curve"]

# zero-BER points cannot sit on a log axis; they are plotted at this floor
BER_FLOOR = 1e-8

_WIDTH, _HEIGHT = 640, 480
_ML, _MR, _MT, _MB = 70, 20, 20, 50
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _xmap(x, x0, x1):
    span = x1 - x0 if x1 > x0 else 1.0
    return _ML + (x - x0) / span * (_WIDTH - _ML - _MR)


def _ymap(log_ber, lo, hi):
    span = hi - lo if hi > lo else 1.0
    return _MT + (hi - log_ber) / span * (_HEIGHT - _MT - _MB)


def emit_curve(series, path) -> None:
    """Write one log-scale BER curve per strategy into an SVG file.

    ``series`` maps a strategy label to its list of BerRecord-like objects
    (anything with ``ebno_db`` and ``ber`` attributes).  Raises before
    touching the file when there is nothing to plot.
    """
    items = list(series.items()) if hasattr(series, "items") else list(series)
    if not items:
        raise ValueError("no series to plot")
    for label, records in items:
        if not list(records):
            raise ValueError(f"series {label!r} has no points")

    xs = [r.ebno_db for _, records in items for r in records]
    bers = [max(r.ber, BER_FLOOR) for _, records in items for r in records]
    x0, x1 = min(xs), max(xs)
    if x0 == x1:
        x0, x1 = x0 - 0.5, x1 + 0.5
    lo = math.floor(math.log10(min(bers)))
    hi = math.ceil(math.log10(max(bers)))
    lo = max(lo, round(math.log10(BER_FLOOR)))
    hi = min(hi, 0)
    if hi <= lo:
        hi = lo + 1

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">'
    )
    out.append(f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>')
    plot_w = _WIDTH - _ML - _MR
    plot_h = _HEIGHT - _MT - _MB
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>'
    )

    for exp in range(hi, lo - 1, -1):
        y = _ymap(exp, lo, hi)
        out.append(
            f'<line x1="{_ML}" y1="{y:.2f}" x2="{_WIDTH - _MR}" y2="{y:.2f}" '
            f'stroke="#cccccc" stroke-width="0.5"/>'
        )
        out.append(
            f'<text x="{_ML - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">1e{exp}</text>'
        )
    first_tick = math.ceil(x0)
    last_tick = math.floor(x1)
    for tick in range(first_tick, last_tick + 1):
        x = _xmap(tick, x0, x1)
        out.append(
            f'<line x1="{x:.2f}" y1="{_HEIGHT - _MB}" x2="{x:.2f}" '
            f'y2="{_HEIGHT - _MB + 5}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{_HEIGHT - _MB + 20}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{tick}</text>'
        )
    out.append(
        f'<text x="{_ML + plot_w / 2:.2f}" y="{_HEIGHT - 10}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">Eb/N0 (dB)</text>'
    )
    out.append(
        f'<text x="18" y="{_MT + plot_h / 2:.2f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14" '
        f'transform="rotate(-90 18 {_MT + plot_h / 2:.2f})">BER</text>'
    )

    for idx, (label, records) in enumerate(items):
        color = _COLORS[idx % len(_COLORS)]
        pts = [
            (
                _xmap(r.ebno_db, x0, x1),
                _ymap(math.log10(max(r.ber, BER_FLOOR)), lo, hi),
            )
            for r in records
        ]
        d = "M " + " L ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts:
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="{color}"/>')
        out.append(
            f'<text x="{_WIDTH - _MR - 10}" y="{_MT + 18 + 16 * idx}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12" fill="{color}">{label}</text>'
        )

    out.append("</svg>")
    with open(path, "w", encoding="ascii", newline="") as f:
        f.write("\n".join(out) + "\n")

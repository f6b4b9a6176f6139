"""Dependency-free SVG heatmaps of sweep aggregates."""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .errors import IncompleteGrid
from .synthgen import resolution_label

# (lower bound, fill, label); first matching band wins
JACCARD_BANDS = [
    (0.95, "#ffffb2", "excellent"),
    (0.90, "#fecc5c", "good"),
    (0.80, "#fd8d3c", "acceptable"),
    (0.50, "#e31a1c", "poor"),
    (-math.inf, "#54278f", "very poor"),
]
# distances in data units; lower is better
ERROR_BANDS = [
    (0.5, "#ffffb2", "< 0.5"),
    (1.0, "#fecc5c", "< 1"),
    (2.0, "#fd8d3c", "< 2"),
    (5.0, "#e31a1c", "< 5"),
    (math.inf, "#54278f", ">= 5"),
]
MISSING_FILL = "#bdbdbd"
DARK_FILLS = {"#e31a1c", "#54278f"}

CELL = 56
MARGIN_LEFT = 70
MARGIN_TOP = 48


def band(value: float, metric: str = "jaccard"):
    """``(fill, label)`` of the color band containing ``value``."""
    if value is None or math.isnan(value):
        return MISSING_FILL, "n/a"
    if metric == "jaccard":
        for lo, fill, label in JACCARD_BANDS:
            if value >= lo:
                return fill, label
    for hi, fill, label in ERROR_BANDS:
        if value < hi:
            return fill, label
    return ERROR_BANDS[-1][1], ERROR_BANDS[-1][2]


def _num(v: float) -> str:
    return f"{v:g}"


def render_heatmap(values, noise_levels, outlier_levels, metric="jaccard", title="") -> str:
    """SVG text for a noise x outlier grid.

    ``values`` maps ``(noise, outliers)`` to a number (NaN allowed).
    Rows are noise levels, columns outlier levels, each cell annotated with
    its value to three decimals.
    """
    w = MARGIN_LEFT + CELL * len(outlier_levels) + 10
    h = MARGIN_TOP + CELL * len(noise_levels) + 30
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
           f'viewBox="0 0 {w} {h}" font-family="sans-serif">',
           f'<rect width="{w}" height="{h}" fill="#ffffff"/>',
           f'<text x="{w / 2:g}" y="18" font-size="13" text-anchor="middle">{escape(title)}</text>']
    for c, o in enumerate(outlier_levels):
        x = MARGIN_LEFT + c * CELL + CELL / 2
        out.append(f'<text x="{x:g}" y="{MARGIN_TOP - 6}" font-size="11" '
                   f'text-anchor="middle">{_num(o)}</text>')
    for rr, n in enumerate(noise_levels):
        y = MARGIN_TOP + rr * CELL + CELL / 2 + 4
        out.append(f'<text x="{MARGIN_LEFT - 8}" y="{y:g}" font-size="11" '
                   f'text-anchor="end">{_num(n)}%</text>')
        for c, o in enumerate(outlier_levels):
            v = values[(n, o)]
            fill, label = band(v, metric)
            x0 = MARGIN_LEFT + c * CELL
            y0 = MARGIN_TOP + rr * CELL
            ink = "#ffffff" if fill in DARK_FILLS else "#000000"
            text = "n/a" if math.isnan(v) else f"{v:.3f}"
            out.append(f'<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="{fill}" '
                       f'stroke="#ffffff"><title>{escape(label)}</title></rect>')
            out.append(f'<text x="{x0 + CELL / 2:g}" y="{y0 + CELL / 2 + 4:g}" font-size="11" '
                       f'text-anchor="middle" fill="{ink}">{text}</text>')
    out.append(f'<text x="{MARGIN_LEFT + CELL * len(outlier_levels) / 2:g}" y="{h - 8}" '
               f'font-size="11" text-anchor="middle">outliers</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_heatmap(rows, metric: str, out_dir, detector: str | None = None) -> list[Path]:
    """Write one SVG per resolution for one detector's mean ``metric``.

    Returns the written paths, named ``<detector>_<metric>_<resolution>.svg``.

    Raises
    ------
    IncompleteGrid
        If some (noise, outliers) cell is missing at some resolution.
    """
    if metric not in ("jaccard", "ad", "rmse"):
        raise ValueError(f"unknown metric {metric!r}")
    agg = [r for r in rows if r.trial == "mean"]
    if detector is None:
        dets = sorted({r.detector for r in agg})
        if len(dets) != 1:
            raise ValueError(f"rows hold several detectors {dets}; pick one")
        detector = dets[0]
    agg = [r for r in agg if r.detector == detector]
    if not agg:
        raise IncompleteGrid(f"no aggregate rows for detector {detector!r}")
    noise = sorted({r.noise_pct for r in agg})
    outl = sorted({r.outliers for r in agg})
    qs = sorted({r.q for r in agg})
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for q in qs:
        values = {(r.noise_pct, r.outliers): getattr(r, metric) for r in agg if r.q == q}
        missing = [(n, o) for n in noise for o in outl if (n, o) not in values]
        if missing:
            raise IncompleteGrid(f"q={q}: missing cells {missing[:3]}")
        res = resolution_label(q)
        title = f"{detector} mean {metric}, resolution {res}"
        path = out_dir / f"{detector}_{metric}_{res}.svg"
        path.write_text(render_heatmap(values, noise, outl, metric, title))
        paths.append(path)
    return paths


def format_winners(table) -> str:
    """Plain-text win-count table, one row per detector, one column per resolution."""
    qs = sorted(table.wins_by_q)
    head = ["detector"] + [resolution_label(q) for q in qs] + ["total"]
    lines = ["\t".join(head)]
    for d, total in table.wins.items():
        lines.append("\t".join([d] + [str(table.wins_by_q[q][d]) for q in qs] + [str(total)]))
    return "\n".join(lines) + "\n"

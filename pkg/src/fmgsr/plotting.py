"""Hand-rolled SVG 1.1 emission of the study charts (no renderer dependency).

One log-log chart per (halo, ns) group: up to four error curves (one per SR
depth) plus the quadratic reference line.  Geometry carries stable classes so
charts are machine-checkable: data segments are ``line.seg``, data points are
``.marker`` elements, the reference line is ``line.ref``, and every curve
lives in a ``g.series`` group with a ``data-label`` attribute.
"""

from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .harness import HALO_ORDER, NS_VALUES, NSR_VALUES, StudyRecord
from .mesh import HaloMode

SERIES_LABELS = {
    0: "FMG",
    1: "FMG-SR 1-grid",
    2: "FMG-SR 2-grids",
    3: "FMG-SR 3-grids",
}
REF_LABEL = "quadratic"

_STYLES = {
    0: ("#000000", "7,3", "diamond"),
    1: ("#0040c0", "8,3,2,3", "cross"),
    2: ("#c00000", "2,3", "circle"),
    3: ("#008000", "", "square"),
}
_REF_COLOR = "#b000b0"

_WIDTH, _HEIGHT = 640, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 24, 36, 50


def emit_plot(records: list[StudyRecord], path) -> list[Path]:
    """Write one SVG chart per (halo, ns) group found in ``records``.

    A single group goes to ``path`` itself; multiple groups go to sibling
    files named ``<stem>_halo<label>_ns<ns><suffix>``.  Returns the written
    paths in canonical group order.
    """
    if not records:
        raise ValueError("no records to plot")
    path = Path(path)
    groups = {}
    for r in records:
        groups.setdefault((r.halo_mode, r.ns), []).append(r)
    keys = [
        (halo, ns)
        for halo in HALO_ORDER
        for ns in NS_VALUES
        if (halo, ns) in groups
    ]
    written = []
    for halo, ns in keys:
        if len(keys) == 1:
            target = path
        else:
            suffix = path.suffix or ".svg"
            target = path.with_name(f"{path.stem}_halo{halo.label}_ns{ns}{suffix}")
        target.write_text(_chart_svg(groups[(halo, ns)], halo, ns), encoding="ascii")
        written.append(target)
    return written


def _chart_svg(records: list[StudyRecord], halo: HaloMode, ns: int) -> str:
    series = []
    for n_sr in NSR_VALUES:
        points = sorted(
            ((r.n, r.rel_error) for r in records if r.n_sr == n_sr)
        )
        if points:
            series.append((n_sr, points))
    ref_points = sorted({(r.n, r.quad_ref) for r in records})

    values = [p for _, pts in series for p in pts] + ref_points
    if any(v <= 0.0 for _, v in values):
        raise ValueError("log-log chart needs positive error values")
    x_lo = math.log2(min(n for n, _ in values))
    x_hi = math.log2(max(n for n, _ in values))
    y_lo = math.floor(math.log10(min(v for _, v in values)))
    y_hi = math.ceil(math.log10(max(v for _, v in values)))
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_hi += 1

    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def px(n: float) -> float:
        return _LEFT + (math.log2(n) - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return _TOP + (y_hi - math.log10(v)) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif">',
        f'<rect class="frame" x="{_LEFT}" y="{_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333333"/>',
        f'<text x="{_WIDTH / 2:.0f}" y="20" text-anchor="middle" '
        f'font-size="14">{escape(f"halo={halo.label}, ns={ns}")}</text>',
        f'<text x="{_WIDTH / 2:.0f}" y="{_HEIGHT - 10}" text-anchor="middle" '
        f'font-size="12">N cells</text>',
        f'<text x="16" y="{_HEIGHT / 2:.0f}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_HEIGHT / 2:.0f})">relative L2 error</text>',
    ]

    for e in range(math.ceil(x_lo), math.floor(x_hi) + 1):
        x = px(2 ** e)
        y0 = _TOP + plot_h
        out.append(
            f'<line class="tick" x1="{x:.2f}" y1="{y0}" x2="{x:.2f}" '
            f'y2="{y0 + 5}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{x:.2f}" y="{y0 + 18}" text-anchor="middle" '
            f'font-size="11">{2 ** e}</text>'
        )
    for d in range(y_lo, y_hi + 1):
        y = py(10.0 ** d)
        out.append(
            f'<line class="tick" x1="{_LEFT - 5}" y1="{y:.2f}" x2="{_LEFT}" '
            f'y2="{y:.2f}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{_LEFT - 8}" y="{y + 4:.2f}" text-anchor="end" '
            f'font-size="11">1e{d}</text>'
        )

    out.append(f'<g class="series" data-label="{REF_LABEL}">')
    for (n0, v0), (n1, v1) in zip(ref_points, ref_points[1:]):
        out.append(
            f'<line class="ref" x1="{px(n0):.2f}" y1="{py(v0):.2f}" '
            f'x2="{px(n1):.2f}" y2="{py(v1):.2f}" stroke="{_REF_COLOR}"/>'
        )
    out.append("</g>")

    for n_sr, points in series:
        color, dash, marker = _STYLES[n_sr]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<g class="series" data-label="{escape(SERIES_LABELS[n_sr])}">'
        )
        for (n0, v0), (n1, v1) in zip(points, points[1:]):
            out.append(
                f'<line class="seg" x1="{px(n0):.2f}" y1="{py(v0):.2f}" '
                f'x2="{px(n1):.2f}" y2="{py(v1):.2f}" '
                f'stroke="{color}" stroke-width="1.5"{dash_attr}/>'
            )
        for n, v in points:
            out.append(_marker(marker, px(n), py(v), color))
        out.append("</g>")

    out.extend(_legend(series))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _marker(shape: str, x: float, y: float, color: str) -> str:
    r = 3.5
    if shape == "diamond":
        d = (
            f"M {x:.2f} {y - r:.2f} L {x + r:.2f} {y:.2f} "
            f"L {x:.2f} {y + r:.2f} L {x - r:.2f} {y:.2f} Z"
        )
        return f'<path class="marker" d="{d}" fill="{color}"/>'
    if shape == "cross":
        d = (
            f"M {x - r:.2f} {y - r:.2f} L {x + r:.2f} {y + r:.2f} "
            f"M {x - r:.2f} {y + r:.2f} L {x + r:.2f} {y - r:.2f}"
        )
        return f'<path class="marker" d="{d}" stroke="{color}" fill="none"/>'
    if shape == "circle":
        return (
            f'<circle class="marker" cx="{x:.2f}" cy="{y:.2f}" r="{r:.2f}" '
            f'stroke="{color}" fill="none"/>'
        )
    return (
        f'<rect class="marker" x="{x - r:.2f}" y="{y - r:.2f}" '
        f'width="{2 * r:.2f}" height="{2 * r:.2f}" stroke="{color}" fill="none"/>'
    )


def _legend(series: list[tuple[int, list]]) -> list[str]:
    x0 = _WIDTH - _RIGHT - 150
    y0 = _TOP + 12
    out = ['<g class="legend">']
    entries = [(SERIES_LABELS[n_sr], _STYLES[n_sr][0]) for n_sr, _ in series]
    entries.append((REF_LABEL, _REF_COLOR))
    for i, (label, color) in enumerate(entries):
        y = y0 + 16 * i
        out.append(
            f'<line class="swatch" x1="{x0}" y1="{y}" x2="{x0 + 22}" y2="{y}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(
            f'<text x="{x0 + 28}" y="{y + 4}" font-size="11">{escape(label)}</text>'
        )
    out.append("</g>")
    return out

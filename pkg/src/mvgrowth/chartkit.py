"""Standalone SVG growth charts.

Four chart types:

* ``scatter_extremes`` - one scatter of a reference sample, extreme points
  as open circles, central points as crosses, the rest as small dots;
* ``trajectory_panels`` - one scatter per time with the patient as a solid
  circle, axes shared across panels;
* ``projected_boxplots`` - one boxplot per time of the reference projected on
  a direction, with the patient's projection as a solid circle;
* ``coordinate_boxplots`` - the same for each raw coordinate (p rows, k
  columns).

Output is plain SVG 1.1 with inline styling and fixed number formatting,
so identical input gives byte-identical text.  Every glyph carries a
``class`` attribute (``extreme``, ``central``, ``ordinary``, ``ref``,
``patient``, ``box``, ``median``, ``whisker``, ``outlier``) for downstream
inspection.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .data import ReferenceSeries, Trajectory, align, as_sample
from .direction import UnitDirection, project
from .errors import DimensionError
from .quantiles import CENTRAL, EXTREME, ORDINARY

__all__ = [
    "PANEL",
    "MARGIN",
    "ChartDoc",
    "BoxStats",
    "boxplot_stats",
    "scatter_extremes",
    "trajectory_panels",
    "projected_boxplots",
    "coordinate_boxplots",
]

PANEL = 250
MARGIN = 10
_TITLE = 14  # title strip inside the margin-bounded panel
_PAD = 0.04


@dataclass(frozen=True)
class ChartDoc:
    svg_text: str
    width: int
    height: int
    panel_count: int

    def save(self, path) -> Path:
        path = Path(path)
        path.write_text(self.svg_text, encoding="utf-8", newline="\n")
        return path


@dataclass(frozen=True)
class BoxStats:
    """Tukey boxplot summary; quartiles use linear interpolation."""

    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]


def boxplot_stats(values) -> BoxStats:
    v = np.sort(np.asarray(values, dtype=float).ravel())
    if v.size == 0:
        raise DimensionError("boxplot needs at least one value")
    q1, med, q3 = np.quantile(v, [0.25, 0.5, 0.75])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo_fence) & (v <= hi_fence)]
    outliers = v[(v < lo_fence) | (v > hi_fence)]
    return BoxStats(
        q1=float(q1),
        median=float(med),
        q3=float(q3),
        whisker_low=float(inside[0]),
        whisker_high=float(inside[-1]),
        outliers=tuple(float(o) for o in outliers),
    )


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _range(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi == lo:
        return lo - 0.5, hi + 0.5
    pad = _PAD * (hi - lo)
    return lo - pad, hi + pad


class _Panel:
    """Pixel mapping for one panel; the plot rectangle excludes the margins
    and the title strip."""

    def __init__(self, row: int, col: int, xrange, yrange, title: str) -> None:
        self.row, self.col = row, col
        self.left = col * PANEL + MARGIN
        self.right = (col + 1) * PANEL - MARGIN
        self.top = row * PANEL + MARGIN + _TITLE
        self.bottom = (row + 1) * PANEL - MARGIN
        self.xrange, self.yrange = xrange, yrange
        self.title = title
        self.parts: list[str] = []

    def x(self, v: float) -> float:
        lo, hi = self.xrange
        return self.left + (v - lo) / (hi - lo) * (self.right - self.left)

    def y(self, v: float) -> float:
        lo, hi = self.yrange
        return self.bottom - (v - lo) / (hi - lo) * (self.bottom - self.top)

    def add(self, element: str) -> None:
        self.parts.append(element)

    def render(self) -> str:
        head = (
            f'<g class="panel" data-row="{self.row}" data-col="{self.col}">\n'
            f'<rect class="frame" x="{_fmt(self.left)}" y="{_fmt(self.top)}" '
            f'width="{_fmt(self.right - self.left)}" height="{_fmt(self.bottom - self.top)}" '
            f'fill="none" stroke="#888888" stroke-width="0.5"/>\n'
            f'<text class="title" x="{_fmt((self.left + self.right) / 2)}" '
            f'y="{_fmt(self.top - 4)}" font-family="sans-serif" font-size="10" '
            f'text-anchor="middle">{escape(self.title)}</text>\n'
        )
        return head + "".join(p + "\n" for p in self.parts) + "</g>\n"


def _document(panels: Sequence[_Panel], rows: int, cols: int, title: str) -> ChartDoc:
    width, height = cols * PANEL, rows * PANEL
    body = "".join(p.render() for p in panels)
    text = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">\n'
        f"<title>{escape(title)}</title>\n"
        f'<rect class="background" x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
        f"{body}</svg>\n"
    )
    return ChartDoc(text, width, height, len(panels))


def _time_label(t: float) -> str:
    return f"t = {t:g}"


def _patient(panel: _Panel, x: float, y: float) -> None:
    panel.add(f'<circle class="patient" cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" fill="black"/>')


# -- scatter charts ------------------------------------------------------------


def scatter_extremes(ref, labels: Sequence[str], title: str = "extreme and central points") -> ChartDoc:
    """Scatter of a bivariate sample with per-point labels from
    :func:`mvgrowth.quantiles.classify_extremes`."""
    ref = as_sample(ref)
    if ref.shape[1] != 2:
        raise DimensionError(f"scatter needs bivariate data, got p={ref.shape[1]}")
    if len(labels) != ref.shape[0]:
        raise DimensionError(f"{len(labels)} labels for {ref.shape[0]} points")
    panel = _Panel(0, 0, _range(ref[:, 0]), _range(ref[:, 1]), title)
    for (vx, vy), label in zip(ref, labels):
        px, py = _fmt(panel.x(vx)), _fmt(panel.y(vy))
        if label == EXTREME:
            panel.add(f'<circle class="extreme" cx="{px}" cy="{py}" r="3" fill="none" stroke="black" stroke-width="0.8"/>')
        elif label == CENTRAL:
            cx, cy, h = panel.x(vx), panel.y(vy), 2.5
            d = (
                f"M{_fmt(cx - h)} {_fmt(cy - h)}L{_fmt(cx + h)} {_fmt(cy + h)}"
                f"M{_fmt(cx - h)} {_fmt(cy + h)}L{_fmt(cx + h)} {_fmt(cy - h)}"
            )
            panel.add(f'<path class="central" d="{d}" stroke="black" stroke-width="0.8"/>')
        elif label == ORDINARY:
            panel.add(f'<circle class="ordinary" cx="{px}" cy="{py}" r="1" fill="#999999"/>')
        else:
            raise ValueError(f"unknown label {label!r}")
    return _document([panel], 1, 1, title)


def trajectory_panels(refs: ReferenceSeries, traj: Trajectory, title: str = "reference samples and patient") -> ChartDoc:
    """One scatter per trajectory time, all panels on common axes."""
    if refs.p != 2:
        raise DimensionError(f"trajectory panels need bivariate data, got p={refs.p}")
    pairs = align(traj, refs)
    allx = np.concatenate([ref[:, 0] for _, _, ref in pairs] + [traj.points[:, 0]])
    ally = np.concatenate([ref[:, 1] for _, _, ref in pairs] + [traj.points[:, 1]])
    xr, yr = _range(allx), _range(ally)
    panels = []
    for col, (t, x, ref) in enumerate(pairs):
        panel = _Panel(0, col, xr, yr, _time_label(t))
        for vx, vy in ref:
            panel.add(f'<circle class="ref" cx="{_fmt(panel.x(vx))}" cy="{_fmt(panel.y(vy))}" r="1" fill="#999999"/>')
        _patient(panel, panel.x(x[0]), panel.y(x[1]))
        panels.append(panel)
    return _document(panels, 1, len(panels), title)


# -- boxplot charts --------------------------------------------------------------


def _boxplot(panel: _Panel, values: np.ndarray, patient_value: float) -> BoxStats:
    st = boxplot_stats(values)
    mid = (panel.left + panel.right) / 2
    half = (panel.right - panel.left) * 0.2
    y1, y3 = panel.y(st.q1), panel.y(st.q3)
    data = f'data-q1="{st.q1!r}" data-median="{st.median!r}" data-q3="{st.q3!r}"'
    panel.add(
        f'<rect class="box" x="{_fmt(mid - half)}" y="{_fmt(y3)}" width="{_fmt(2 * half)}" '
        f'height="{_fmt(y1 - y3)}" fill="#dddddd" stroke="black" stroke-width="0.8" {data}/>'
    )
    ym = _fmt(panel.y(st.median))
    panel.add(f'<line class="median" x1="{_fmt(mid - half)}" y1="{ym}" x2="{_fmt(mid + half)}" y2="{ym}" stroke="black" stroke-width="1.5"/>')
    for end, edge in ((st.whisker_low, y1), (st.whisker_high, y3)):
        yw = _fmt(panel.y(end))
        panel.add(
            f'<line class="whisker" x1="{_fmt(mid)}" y1="{_fmt(edge)}" x2="{_fmt(mid)}" y2="{yw}" '
            f'stroke="black" stroke-width="0.8" data-value="{end!r}"/>'
        )
        panel.add(f'<line class="cap" x1="{_fmt(mid - half / 2)}" y1="{yw}" x2="{_fmt(mid + half / 2)}" y2="{yw}" stroke="black" stroke-width="0.8"/>')
    for o in st.outliers:
        panel.add(f'<circle class="outlier" cx="{_fmt(mid)}" cy="{_fmt(panel.y(o))}" r="1.5" fill="none" stroke="black" stroke-width="0.6"/>')
    panel.add(
        f'<circle class="patient" cx="{_fmt(mid)}" cy="{_fmt(panel.y(patient_value))}" r="4" '
        f'fill="black" data-value="{float(patient_value)!r}"/>'
    )
    return st


def projected_boxplots(
    refs: ReferenceSeries,
    traj: Trajectory,
    a,
    title: str | None = None,
) -> ChartDoc:
    """Boxplots of each reference sample projected on ``a``, with the
    patient's projection, one panel per time on a common value axis."""
    pairs = align(traj, refs)
    v = a.vector if isinstance(a, UnitDirection) else np.asarray(a, dtype=float)
    proj = [project(ref, v)[:, 0] for _, _, ref in pairs]
    px = project(traj.points, v)[:, 0]
    yr = _range(np.concatenate(proj + [px]))
    panels = []
    for col, ((t, _, _), values) in enumerate(zip(pairs, proj)):
        panel = _Panel(0, col, (0.0, 1.0), yr, _time_label(t))
        _boxplot(panel, values, px[col])
        panels.append(panel)
    if title is None:
        title = "projection on (" + ", ".join(f"{c:.3f}" for c in v) + ")"
    return _document(panels, 1, len(panels), title)


def coordinate_boxplots(refs: ReferenceSeries, traj: Trajectory, title: str = "coordinate-wise boxplots") -> ChartDoc:
    """Row ``r`` holds the boxplots of coordinate ``r`` at every time."""
    pairs = align(traj, refs)
    panels = []
    for r in range(refs.p):
        yr = _range(np.concatenate([ref[:, r] for _, _, ref in pairs] + [traj.points[:, r]]))
        for col, (t, x, ref) in enumerate(pairs):
            panel = _Panel(r, col, (0.0, 1.0), yr, f"x{r + 1}, {_time_label(t)}")
            _boxplot(panel, ref[:, r], x[r])
            panels.append(panel)
    return _document(panels, refs.p, len(pairs), title)

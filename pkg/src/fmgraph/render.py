"""Lattice-graph layout of a capacity and its SVG / Graphviz DOT output.

Layout conventions:

* vertical position is ``|A| / n`` (topological style) or ``mu(A)``
  (height-on style), mapped onto the canvas between the margins;
* level ``r`` spans ``C(n, r) * l / C(n, round(n/2))`` horizontally with its
  subsets in equally wide slots, so every level shares the same spacing;
* a subset sits mirror-opposite its complement (``x(A) = -x(N \\ A)``);
* edge width and gray-to-black color grow with the marginal contribution;
* optional index overlays draw circles sized by ``|value|`` and colored on a
  red (-1) / gray (0) / green (+1) scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from fmgraph import transforms
from fmgraph.lattice import FuzzyMeasure, _as_measure, cardinalities, covering_edges, subset_label

STYLES = ("topological", "height_on")
OVERLAYS = ("none", "mobius", "nonadditivity", "nonmodularity", "shapley_comprehensive")
_STYLE_ALIASES = {"height": "height_on", "height-on": "height_on", "topo": "topological"}

GRAY = (0x80, 0x80, 0x80)
BLACK = (0x00, 0x00, 0x00)
RED = (0xFF, 0x00, 0x00)
GREEN = (0x00, 0x80, 0x00)


def _lerp(c0, c1, t: float) -> tuple[int, int, int]:
    return tuple(int(round(a + (b - a) * t)) for a, b in zip(c0, c1))


def hex_color(rgb) -> str:
    return "#{:02X}{:02X}{:02X}".format(*rgb)


def edge_color(delta: float) -> str:
    """Gray at 0, black at 1 (clamped)."""
    return hex_color(_lerp(GRAY, BLACK, min(max(delta, 0.0), 1.0)))


def diverging_color(value: float) -> str:
    """Red at -1, gray at 0, green at +1 (clamped)."""
    t = min(max(value, -1.0), 1.0)
    if t < 0:
        return hex_color(_lerp(GRAY, RED, -t))
    return hex_color(_lerp(GRAY, GREEN, t))


def fmt(v: float) -> str:
    """Fixed four-decimal formatting used in every emitted file."""
    s = f"{v:.4f}"
    return "0.0000" if s == "-0.0000" else s


@dataclass(frozen=True)
class StyleConfig:
    style: str = "topological"
    overlay: str = "none"
    width: float = 800.0
    height: float = 600.0
    margin: float = 40.0
    base_width: Optional[float] = None
    stroke_min: float = 0.5
    stroke_max: float = 4.0
    label_mode: str = "canonical"
    node_radius: float = 4.0
    overlay_radius: float = 14.0

    def __post_init__(self):
        style = _STYLE_ALIASES.get(self.style, self.style)
        if style not in STYLES:
            raise ValueError(f"unknown style {self.style!r}; expected one of {STYLES}")
        object.__setattr__(self, "style", style)
        overlay = "shapley_comprehensive" if self.overlay == "shapley" else self.overlay
        if overlay not in OVERLAYS:
            raise ValueError(f"unknown overlay {self.overlay!r}; expected one of {OVERLAYS}")
        object.__setattr__(self, "overlay", overlay)
        if not self.stroke_min < self.stroke_max:
            raise ValueError("stroke_min must be below stroke_max")
        if self.label_mode not in ("canonical", "figure"):
            raise ValueError(f"unknown label mode {self.label_mode!r}")

    @property
    def line_length(self) -> float:
        return self.base_width if self.base_width is not None else self.width - 2 * self.margin

    @property
    def plot_height(self) -> float:
        return self.height - 2 * self.margin


@dataclass(frozen=True)
class LayoutVertex:
    mask: int
    x: float
    y: float
    px: float
    py: float
    label: str
    value: float
    radius: float
    color: str
    value_text: str


@dataclass(frozen=True)
class LayoutEdge:
    lower: int
    upper: int
    criterion: int
    height: float
    stroke_width: float
    color: str


@dataclass(frozen=True)
class LayoutGraph:
    n: int
    config: StyleConfig
    vertices: tuple[LayoutVertex, ...]
    edges: tuple[LayoutEdge, ...]

    def vertex(self, mask: int) -> LayoutVertex:
        return self.vertices[mask]


def level_width(n: int, r: int, line_length: float) -> float:
    """Horizontal extent allotted to the subsets of size ``r``."""
    widest = math.comb(n, round(n / 2))
    return math.comb(n, r) * line_length / widest


def horizontal_positions(n: int, line_length: float) -> np.ndarray:
    """Centered x offset of every mask; ``x(A) == -x(N \\ A)``."""
    full = (1 << n) - 1
    card = cardinalities(n)
    xs = np.zeros(1 << n)
    spacing = line_length / math.comb(n, round(n / 2))

    def slot(j: int, count: int) -> float:
        return (j + 0.5 - count / 2) * spacing

    for r in range(n + 1):
        if 2 * r > n:
            continue
        masks = np.nonzero(card == r)[0].tolist()
        count = len(masks)
        if 2 * r < n:
            for j, a in enumerate(masks):
                xs[a] = slot(j, count)
        else:
            # middle level: complement pairs in mirrored slots, criterion 1 on the left
            left = [a for a in masks if a & 1]
            for j, a in enumerate(left):
                xs[a] = slot(j, count)
                xs[full ^ a] = slot(count - 1 - j, count)
    for a in range(1 << n):
        if 2 * card[a] > n:
            xs[a] = -xs[full ^ a]
    return xs


def layout(mu: FuzzyMeasure, cfg: StyleConfig = StyleConfig()) -> LayoutGraph:
    """Position every subset and edge of the lattice of ``mu``.

    Raises:
        ValidationError: ``mu`` is not a valid fuzzy measure.
    """
    mu = _as_measure(mu)
    n = mu.n
    v = mu.values
    card = cardinalities(n)
    xs = horizontal_positions(n, cfg.line_length)
    ys = card / n if cfg.style == "topological" else v.copy()

    index = None
    if cfg.overlay != "none":
        index = transforms.index_vector(mu, cfg.overlay).values.values

    vertices = []
    for a in range(1 << n):
        px = cfg.width / 2 + xs[a]
        py = cfg.height - cfg.margin - ys[a] * cfg.plot_height
        if index is None:
            radius, color, text = cfg.node_radius, "#000000", fmt(v[a])
        else:
            iv = float(index[a])
            radius = cfg.overlay_radius * min(abs(iv), 1.0)
            if cfg.overlay == "shapley_comprehensive":
                color = edge_color(iv)
            else:
                color = diverging_color(iv)
            text = fmt(iv)
        vertices.append(
            LayoutVertex(a, float(xs[a]), float(ys[a]), float(px), float(py), subset_label(a, cfg.label_mode), float(v[a]), float(radius), color, text)
        )

    lower, upper, crit = covering_edges(n)
    edges = []
    for lo, hi, c in zip(lower.tolist(), upper.tolist(), crit.tolist()):
        delta = float(v[hi] - v[lo])
        t = min(max(delta, 0.0), 1.0)
        edges.append(LayoutEdge(lo, hi, c, delta, cfg.stroke_min + t * (cfg.stroke_max - cfg.stroke_min), edge_color(delta)))
    return LayoutGraph(n, cfg, tuple(vertices), tuple(edges))


def render_svg(g: LayoutGraph, cfg: Optional[StyleConfig] = None, title: Optional[str] = None) -> str:
    """SVG 1.1 document: one line per edge, one circle and value text per vertex."""
    cfg = cfg or g.config
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(cfg.width)}" height="{fmt(cfg.height)}" '
        f'viewBox="0 0 {fmt(cfg.width)} {fmt(cfg.height)}" font-family="sans-serif" font-size="10">',
        f'<rect x="0" y="0" width="{fmt(cfg.width)}" height="{fmt(cfg.height)}" fill="#FFFFFF"/>',
    ]
    if title:
        out.append(f'<text class="title" x="{fmt(cfg.width / 2)}" y="{fmt(cfg.margin / 2)}" text-anchor="middle">{escape(title)}</text>')
    out.append('<g class="edges">')
    for e in g.edges:
        a, b = g.vertices[e.lower], g.vertices[e.upper]
        out.append(
            f'<line x1="{fmt(a.px)}" y1="{fmt(a.py)}" x2="{fmt(b.px)}" y2="{fmt(b.py)}" '
            f'stroke="{e.color}" stroke-width="{fmt(e.stroke_width)}" data-delta="{fmt(e.height)}"/>'
        )
    out.append("</g>")
    out.append('<g class="vertices">')
    for vx in g.vertices:
        out.append(f'<circle cx="{fmt(vx.px)}" cy="{fmt(vx.py)}" r="{fmt(vx.radius)}" fill="{vx.color}" fill-opacity="0.85"/>')
    out.append("</g>")
    out.append('<g class="labels">')
    for vx in g.vertices:
        gap = max(vx.radius, cfg.node_radius) + 3
        out.append(
            f'<text class="value" x="{fmt(vx.px - gap)}" y="{fmt(vx.py + 3)}" text-anchor="end" fill="{vx.color}">{vx.value_text}</text>'
        )
        out.append(f'<text class="label" x="{fmt(vx.px + gap)}" y="{fmt(vx.py + 3)}" fill="#333333">{escape(vx.label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_dot(mu: FuzzyMeasure, cfg: StyleConfig = StyleConfig()) -> str:
    """Graphviz digraph: one rank group per cardinality, edges labeled by marginal."""
    mu = _as_measure(mu)
    n = mu.n
    card = cardinalities(n)
    lines = ["digraph fuzzy_measure {", "  rankdir=BT;", '  node [shape=ellipse, fontname="sans-serif"];']
    for a in range(1 << n):
        label = f"{subset_label(a, cfg.label_mode)}\\n{fmt(mu.values[a])}"
        lines.append(f'  s{a} [label="{label}"];')
    for r in range(n + 1):
        nodes = " ".join(f"s{a};" for a in np.nonzero(card == r)[0].tolist())
        lines.append(f"  subgraph level{r} {{ rank=same; {nodes} }}")
    lower, upper, _ = covering_edges(n)
    for lo, hi in zip(lower.tolist(), upper.tolist()):
        lines.append(f'  s{lo} -> s{hi} [label="{fmt(mu.values[hi] - mu.values[lo])}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def with_style(cfg: StyleConfig, **changes) -> StyleConfig:
    return replace(cfg, **changes)


# ---------------------------------------------------------------- plots

@dataclass(frozen=True)
class _Frame:
    """Affine map from a data rectangle onto the canvas plot area."""

    x0: float
    x1: float
    y0: float
    y1: float
    left: float
    top: float
    right: float
    bottom: float

    def px(self, x: float) -> float:
        span = self.x1 - self.x0 or 1.0
        return self.left + (x - self.x0) / span * (self.right - self.left)

    def py(self, y: float) -> float:
        span = self.y1 - self.y0 or 1.0
        return self.bottom - (y - self.y0) / span * (self.bottom - self.top)


def _svg_open(width: float, height: float, title: Optional[str]) -> list[str]:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(width)}" height="{fmt(height)}" '
        f'viewBox="0 0 {fmt(width)} {fmt(height)}" font-family="sans-serif" font-size="10">',
        f'<rect x="0" y="0" width="{fmt(width)}" height="{fmt(height)}" fill="#FFFFFF"/>',
    ]
    if title:
        out.append(f'<text class="title" x="{fmt(width / 2)}" y="20.0000" text-anchor="middle">{escape(title)}</text>')
    return out


def _axes(f: _Frame, xlabel: str, ylabel: str, ticks: int = 5) -> list[str]:
    out = [
        '<g class="axes" stroke="#000000" stroke-width="1">',
        f'<line x1="{fmt(f.left)}" y1="{fmt(f.bottom)}" x2="{fmt(f.right)}" y2="{fmt(f.bottom)}"/>',
        f'<line x1="{fmt(f.left)}" y1="{fmt(f.bottom)}" x2="{fmt(f.left)}" y2="{fmt(f.top)}"/>',
        "</g>",
        '<g class="ticks" fill="#000000">',
    ]
    for k in range(ticks + 1):
        xv = f.x0 + (f.x1 - f.x0) * k / ticks
        yv = f.y0 + (f.y1 - f.y0) * k / ticks
        out.append(f'<text x="{fmt(f.px(xv))}" y="{fmt(f.bottom + 14)}" text-anchor="middle">{xv:.3g}</text>')
        out.append(f'<text x="{fmt(f.left - 6)}" y="{fmt(f.py(yv) + 3)}" text-anchor="end">{yv:.3g}</text>')
    out.append("</g>")
    if xlabel:
        out.append(f'<text class="xlabel" x="{fmt((f.left + f.right) / 2)}" y="{fmt(f.bottom + 30)}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        cx, cy = f.left - 34, (f.top + f.bottom) / 2
        out.append(
            f'<text class="ylabel" x="{fmt(cx)}" y="{fmt(cy)}" text-anchor="middle" transform="rotate(-90 {fmt(cx)} {fmt(cy)})">{escape(ylabel)}</text>'
        )
    return out


def _polyline(xs, ys, f: _Frame, color: str, width: float, cls: str) -> str:
    pts = " ".join(f"{fmt(f.px(x))},{fmt(f.py(y))}" for x, y in zip(xs, ys))
    return f'<polyline class="{cls}" points="{pts}" fill="none" stroke="{color}" stroke-width="{fmt(width)}"/>'


def plot_lines(
    series,
    names: Optional[Sequence[str]] = None,
    title: Optional[str] = None,
    xlabel: str = "sample",
    ylabel: str = "value",
    y_range: Optional[tuple[float, float]] = None,
    width: float = 800.0,
    height: float = 600.0,
    margin: float = 60.0,
) -> str:
    """One polyline per series plus a red polyline of the pointwise median.

    ``series`` is a ``(k, L)`` array: ``k`` series of ``L`` points each.

    Raises:
        ValueError: No series or zero-length series.
    """
    data = np.atleast_2d(np.asarray(series, dtype=float))
    if data.size == 0:
        raise ValueError("plot_lines needs at least one nonempty series")
    k, length = data.shape
    names = list(names) if names is not None else [f"series {i + 1}" for i in range(k)]
    if len(names) != k:
        raise ValueError("one name per series required")
    med = np.median(data, axis=0)
    lo, hi = y_range if y_range is not None else (float(data.min()), float(data.max()))
    if hi <= lo:
        lo, hi = lo - 0.5, hi + 0.5
    xs = np.arange(1, length + 1, dtype=float)
    f = _Frame(1.0, float(max(length, 2)), lo, hi, margin, margin, width - margin, height - margin)
    palette = ("#1F77B4", "#FF7F0E", "#2CA02C", "#9467BD", "#8C564B", "#17BECF")
    out = _svg_open(width, height, title)
    out.extend(_axes(f, xlabel, ylabel))
    out.append('<g class="series">')
    for i in range(k):
        out.append(_polyline(xs, data[i], f, palette[i % len(palette)], 1.0, "series"))
    out.append("</g>")
    out.append(_polyline(xs, med, f, "#FF0000", 2.0, "median"))
    out.append('<g class="legend">')
    for i, name in enumerate(names + ["median"]):
        color = "#FF0000" if i == k else palette[i % len(palette)]
        y = margin + 12 * i
        out.append(f'<text x="{fmt(width - margin - 4)}" y="{fmt(y)}" text-anchor="end" fill="{color}">{escape(name)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def plot_scatter(
    points,
    labels: Optional[Sequence[str]] = None,
    x_range: Optional[tuple[float, float]] = None,
    y_range: Optional[tuple[float, float]] = None,
    title: Optional[str] = None,
    xlabel: str = "entropy",
    ylabel: str = "orness",
    width: float = 800.0,
    height: float = 600.0,
    margin: float = 60.0,
) -> str:
    """One labeled circle per ``(x, y)`` point.

    Raises:
        ValueError: No points, or a point outside an explicit range.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ValueError("plot_scatter needs at least one point")
    pts = pts.reshape(-1, 2)
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(pts))]
    if len(labels) != len(pts):
        raise ValueError("one label per point required")
    x0, x1 = x_range if x_range is not None else (float(pts[:, 0].min()), float(pts[:, 0].max()))
    y0, y1 = y_range if y_range is not None else (float(pts[:, 1].min()), float(pts[:, 1].max()))
    slack = 1e-9
    if x_range is not None and (np.any(pts[:, 0] < x0 - slack) or np.any(pts[:, 0] > x1 + slack)):
        raise ValueError("point outside the x range")
    if y_range is not None and (np.any(pts[:, 1] < y0 - slack) or np.any(pts[:, 1] > y1 + slack)):
        raise ValueError("point outside the y range")
    f = _Frame(x0, x1, y0, y1, margin, margin, width - margin, height - margin)
    out = _svg_open(width, height, title)
    out.extend(_axes(f, xlabel, ylabel))
    out.append('<g class="points">')
    for (x, y), lab in zip(pts, labels):
        px, py = f.px(x), f.py(y)
        out.append(f'<circle class="point" cx="{fmt(px)}" cy="{fmt(py)}" r="3.0000" fill="#1F77B4"/>')
        out.append(f'<text x="{fmt(px + 5)}" y="{fmt(py - 4)}" font-size="8">{escape(lab)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _sequential_color(t: float) -> str:
    """White at 0 to dark blue at 1."""
    t = min(max(t, 0.0), 1.0)
    return hex_color(_lerp((0xFF, 0xFF, 0xFF), (0x08, 0x30, 0x6B), t))


def plot_heatmap(
    matrix,
    dendrogram,
    row_labels: Optional[Sequence[str]] = None,
    col_labels: Optional[Sequence[str]] = None,
    title: Optional[str] = None,
    cell: float = 18.0,
    tree_width: float = 160.0,
    margin: float = 40.0,
) -> str:
    """Heatmap with rows in dendrogram leaf order and the merge tree on the left.

    ``matrix`` may be a :class:`~fmgraph.analysis.FeatureMatrix` (labels are
    taken from it) or a plain 2-d array.  Each column is scaled to [0, 1] for
    coloring.

    Raises:
        ValueError: Empty matrix or row count not matching the dendrogram.
    """
    if hasattr(matrix, "data") and hasattr(matrix, "row_ids"):
        row_labels = row_labels or matrix.row_ids
        col_labels = col_labels or matrix.columns
        data = np.asarray(matrix.data, dtype=float)
    else:
        data = np.atleast_2d(np.asarray(matrix, dtype=float))
    if data.size == 0:
        raise ValueError("plot_heatmap needs a nonempty matrix")
    nrow, ncol = data.shape
    if dendrogram.n_leaves != nrow:
        raise ValueError(f"dendrogram has {dendrogram.n_leaves} leaves, matrix has {nrow} rows")
    row_labels = list(row_labels) if row_labels is not None else [str(i) for i in range(nrow)]
    col_labels = list(col_labels) if col_labels is not None else [str(j) for j in range(ncol)]
    order = list(dendrogram.leaf_order)
    pos = {leaf: i for i, leaf in enumerate(order)}

    label_w = 80.0
    top = margin + 40.0
    left = margin + tree_width
    width = left + ncol * cell + label_w + margin
    height = top + nrow * cell + margin
    lo = data.min(axis=0)
    span = data.max(axis=0) - lo
    span[span == 0] = 1.0
    scaled = (data - lo) / span

    out = _svg_open(width, height, title)
    out.append('<g class="cells">')
    for i, leaf in enumerate(order):
        for j in range(ncol):
            out.append(
                f'<rect class="cell" data-row="{leaf}" x="{fmt(left + j * cell)}" y="{fmt(top + i * cell)}" '
                f'width="{fmt(cell)}" height="{fmt(cell)}" fill="{_sequential_color(scaled[leaf, j])}"/>'
            )
    out.append("</g>")
    out.append('<g class="row-labels">')
    for i, leaf in enumerate(order):
        out.append(
            f'<text class="row-label" x="{fmt(left + ncol * cell + 4)}" y="{fmt(top + (i + 0.5) * cell + 3)}">{escape(str(row_labels[leaf]))}</text>'
        )
    out.append("</g>")
    out.append('<g class="col-labels">')
    for j, name in enumerate(col_labels):
        cx, cy = left + (j + 0.5) * cell, top - 4
        out.append(f'<text x="{fmt(cx)}" y="{fmt(cy)}" transform="rotate(-60 {fmt(cx)} {fmt(cy)})">{escape(str(name))}</text>')
    out.append("</g>")

    # merge tree: height 0 at the heatmap edge, growing leftwards
    max_h = max((m.height for m in dendrogram.merges), default=0.0) or 1.0
    hx = lambda h: left - 4 - h / max_h * (tree_width - 8)  # noqa: E731
    ypos = {leaf: top + (pos[leaf] + 0.5) * cell for leaf in range(nrow)}
    xpos = {leaf: hx(0.0) for leaf in range(nrow)}
    out.append('<g class="tree" stroke="#000000" stroke-width="1" fill="none">')
    for k, m in enumerate(dendrogram.merges):
        c = nrow + k
        xm = hx(m.height)
        ya, yb = ypos[m.left], ypos[m.right]
        out.append(
            f'<polyline points="{fmt(xpos[m.left])},{fmt(ya)} {fmt(xm)},{fmt(ya)} {fmt(xm)},{fmt(yb)} {fmt(xpos[m.right])},{fmt(yb)}"/>'
        )
        ypos[c] = (ya + yb) / 2
        xpos[c] = xm
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

"""Deterministic SVG rendering for torus portraits and sweep diagrams.

Documents are assembled by plain string formatting with fixed-precision
coordinates ("%.6f"), so identical scenes produce identical bytes.  No
plotting library is involved: the portraits are simple enough (rect
runs, one path per curve family, a handful of markers) that hand-rolled
SVG 1.1 keeps the output reproducible and dependency-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import LevelValues, Params
from .levelset import gk_data

__all__ = ["Scene", "fold_segments", "render_bifurcation_svg", "render_svg"]

_THETA1_MIN = -math.pi / 2.0
_SPAN = 2.0 * math.pi

_SHADE_FILL = "#ccd9f2"
_FOLD_STROKE = "#1f3a93"
_DASH_STROKE = "#777777"
_FRAME_STROKE = "#000000"
_ORBIT_COLORS = ("#c0392b", "#1e8449", "#7d3c98", "#d68910", "#117a65", "#2c3e50")
_MARKER_FILL = {"Saddle": "#d64541", "Center": "#1e8449", "Degenerate": "#d68910"}

_REGION_FILL = {
    "D1": "#dce8f7",
    "D2": "#c9e7c9",
    "D3": "#f7e3c3",
    "D4": "#e8d3ef",
    "D5": "#f6cfcf",
    "Singular": "#bbbbbb",
}


@dataclass(frozen=True)
class Scene:
    """Portrait description for the flat torus [-pi/2, 3pi/2) x [0, 2pi).

    shading is a boolean theta1-major cell grid of U_k membership;
    boundary holds fold-curve segments ((t1a, t2a), (t1b, t2b)) in angle
    coordinates; orbits are pre-split polylines (arrays of shape (m, 2));
    markers are (theta1, theta2, kind) triples.
    """

    size: int = 640
    label: str = ""
    shading: np.ndarray | None = None
    boundary: Sequence[tuple[tuple[float, float], tuple[float, float]]] = field(
        default_factory=tuple
    )
    orbits: Sequence[np.ndarray] = field(default_factory=tuple)
    markers: Sequence[tuple[float, float, str]] = field(default_factory=tuple)


def _fmt(v: float) -> str:
    out = f"{v:.6f}"
    # normalize negative zero so identical geometry gives identical bytes
    return "0.000000" if out == "-0.000000" else out


def fold_segments(
    b: Params, k: LevelValues, n: int = 256
) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Marching-squares segments of the fold curve g = eps, in angles.

    Nodes sit on an (n+1) x (n+1) lattice over the closed fundamental
    domain; each sign-change cell contributes one or two straight
    segments with linearly interpolated crossings.
    """
    data = gk_data(b, k)
    t1 = _THETA1_MIN + (_SPAN / n) * np.arange(n + 1)
    t2 = (_SPAN / n) * np.arange(n + 1)
    h = (
        (k.k1 / b.b1) * np.cos(t1)[:, None] ** 2
        + (k.k2 / b.b2) * np.sin(t2)[None, :] ** 2
        - data.eps
    )
    segments: list[tuple[tuple[float, float], tuple[float, float]]] = []
    step = _SPAN / n

    def cross(va: float, vb: float) -> float:
        return va / (va - vb)

    for i in range(n):
        row0 = h[i]
        row1 = h[i + 1]
        a1 = t1[i]
        for j in range(n):
            v00, v01 = row0[j], row0[j + 1]
            v10, v11 = row1[j], row1[j + 1]
            case = (
                (1 if v00 > 0 else 0)
                | (2 if v10 > 0 else 0)
                | (4 if v11 > 0 else 0)
                | (8 if v01 > 0 else 0)
            )
            if case in (0, 15):
                continue
            a2 = t2[j]
            # edge midpoints with linear interpolation: bottom (v00-v10),
            # right (v10-v11), top (v01-v11), left (v00-v01)
            pts = {}
            if (v00 > 0) != (v10 > 0):
                pts["b"] = (a1 + step * cross(v00, v10), a2)
            if (v10 > 0) != (v11 > 0):
                pts["r"] = (a1 + step, a2 + step * cross(v10, v11))
            if (v01 > 0) != (v11 > 0):
                pts["t"] = (a1 + step * cross(v01, v11), a2 + step)
            if (v00 > 0) != (v01 > 0):
                pts["l"] = (a1, a2 + step * cross(v00, v01))
            edges = sorted(pts)
            if len(edges) == 2:
                segments.append((pts[edges[0]], pts[edges[1]]))
            elif len(edges) == 4:
                # saddle cell: resolve by the center sign
                center = 0.25 * (v00 + v01 + v10 + v11)
                if (center > 0) == (v00 > 0):
                    segments.append((pts["b"], pts["r"]))
                    segments.append((pts["l"], pts["t"]))
                else:
                    segments.append((pts["b"], pts["l"]))
                    segments.append((pts["r"], pts["t"]))
    return segments


def render_svg(scene: Scene) -> str:
    """Render a torus portrait to SVG 1.1 text, byte-deterministic.

    Layer order: shading, fold curves, dashed guide lines, orbits,
    markers, frame and label.
    """
    size = scene.size

    def x_of(t1: float) -> float:
        return (t1 - _THETA1_MIN) / _SPAN * size

    def y_of(t2: float) -> float:
        return size - t2 / _SPAN * size

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    )
    parts.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>')

    if scene.shading is not None:
        grid = np.asarray(scene.shading, dtype=bool)
        n = grid.shape[0]
        cell = size / n
        rects: list[str] = []
        for i in range(n):
            col = grid[i]
            j = 0
            while j < n:
                if not col[j]:
                    j += 1
                    continue
                j0 = j
                while j < n and col[j]:
                    j += 1
                # theta2 run [j0, j) maps to a rect from the top edge of
                # cell (j-1) down to the bottom edge of cell j0
                rects.append(
                    f'<rect x="{_fmt(i * cell)}" y="{_fmt(size - j * cell)}" '
                    f'width="{_fmt(cell)}" height="{_fmt((j - j0) * cell)}" '
                    f'fill="{_SHADE_FILL}"/>'
                )
        parts.append('<g id="shading">' + "".join(rects) + "</g>")

    if scene.boundary:
        cmds = []
        for (p1, p2) in scene.boundary:
            cmds.append(
                f"M{_fmt(x_of(p1[0]))} {_fmt(y_of(p1[1]))}"
                f"L{_fmt(x_of(p2[0]))} {_fmt(y_of(p2[1]))}"
            )
        parts.append(
            f'<path id="fold" d="{"".join(cmds)}" stroke="{_FOLD_STROKE}" '
            f'stroke-width="1.5" fill="none"/>'
        )

    dash_lines = []
    for t1 in (-math.pi / 2.0, math.pi / 2.0):
        x = x_of(t1)
        dash_lines.append(
            f'<line x1="{_fmt(x)}" y1="0" x2="{_fmt(x)}" y2="{size}"/>'
        )
    for t2 in (0.0, math.pi):
        y = y_of(t2)
        dash_lines.append(
            f'<line x1="0" y1="{_fmt(y)}" x2="{size}" y2="{_fmt(y)}"/>'
        )
    parts.append(
        f'<g id="guides" stroke="{_DASH_STROKE}" stroke-width="1" '
        f'stroke-dasharray="6 4">' + "".join(dash_lines) + "</g>"
    )

    if scene.orbits:
        lines = []
        for idx, poly in enumerate(scene.orbits):
            pts = np.asarray(poly, dtype=float)
            if pts.shape[0] < 2:
                continue
            coords = " ".join(
                f"{_fmt(x_of(p[0]))},{_fmt(y_of(p[1]))}" for p in pts
            )
            color = _ORBIT_COLORS[idx % len(_ORBIT_COLORS)]
            lines.append(
                f'<polyline points="{coords}" stroke="{color}" '
                f'stroke-width="1.2" fill="none"/>'
            )
        parts.append('<g id="orbits">' + "".join(lines) + "</g>")

    if scene.markers:
        marks = []
        for (t1, t2, kind) in scene.markers:
            fill = _MARKER_FILL.get(kind, "#000000")
            marks.append(
                f'<circle cx="{_fmt(x_of(t1))}" cy="{_fmt(y_of(t2))}" r="4" '
                f'fill="{fill}" stroke="#000000" stroke-width="0.8"/>'
            )
        parts.append('<g id="markers">' + "".join(marks) + "</g>")

    parts.append(
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="none" '
        f'stroke="{_FRAME_STROKE}" stroke-width="1.5"/>'
    )
    if scene.label:
        parts.append(
            f'<text x="8" y="18" font-family="monospace" font-size="14" '
            f'fill="#000000">{scene.label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _clip_polyline(
    pts: list[tuple[float, float]],
    k1_lo: float,
    k1_hi: float,
    k2_lo: float,
    k2_hi: float,
) -> list[list[tuple[float, float]]]:
    runs: list[list[tuple[float, float]]] = []
    cur: list[tuple[float, float]] = []
    for p in pts:
        if k1_lo <= p[0] <= k1_hi and k2_lo <= p[1] <= k2_hi and math.isfinite(p[0]):
            cur.append(p)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return [r for r in runs if len(r) >= 2]


def render_bifurcation_svg(
    b: Params,
    k1_lo: float,
    k1_hi: float,
    k2_lo: float,
    k2_hi: float,
    cells: Sequence[dict],
    samples_per_axis: int,
    size: int = 1024,
) -> str:
    """Region atlas over the k-rectangle with the analytic boundary curves.

    Cells are shaded by region tag; on top, the curves k1 = b1, k2 = b2,
    k1/b1 + k2/b2 = 1, and for unequal b the discriminant-zero branches
    and the line k1 + k2 = 2 max(b1, b2).
    """

    def x_of(k1: float) -> float:
        return (k1 - k1_lo) / (k1_hi - k1_lo) * size

    def y_of(k2: float) -> float:
        return size - (k2 - k2_lo) / (k2_hi - k2_lo) * size

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size}" height="{size}" viewBox="0 0 {size} {size}">'
    )
    parts.append(f'<rect x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>')

    n = samples_per_axis
    w1 = (k1_hi - k1_lo) / n
    w2 = (k2_hi - k2_lo) / n
    rects = []
    for cell in cells:
        fill = _REGION_FILL.get(cell["region"], "#ffffff")
        x = x_of(cell["k1"] - 0.5 * w1)
        y = y_of(cell["k2"] + 0.5 * w2)
        rects.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w1 / (k1_hi - k1_lo) * size)}" '
            f'height="{_fmt(w2 / (k2_hi - k2_lo) * size)}" fill="{fill}"/>'
        )
    parts.append('<g id="cells">' + "".join(rects) + "</g>")

    curves: list[tuple[str, list[tuple[float, float]]]] = []
    if k1_lo <= b.b1 <= k1_hi:
        curves.append(("k1-eq-b1", [(b.b1, k2_lo), (b.b1, k2_hi)]))
    if k2_lo <= b.b2 <= k2_hi:
        curves.append(("k2-eq-b2", [(k1_lo, b.b2), (k1_hi, b.b2)]))
    m = 1024
    ks = [k1_lo + (k1_hi - k1_lo) * i / m for i in range(m + 1)]
    curves.append(("ratio-sum-one", [(k1, b.b2 * (1.0 - k1 / b.b1)) for k1 in ks]))
    if not b.equal_b():
        hi = max(b.b1, b.b2)
        # discriminant-zero branches, parametrized along the smaller-b axis
        if b.b1 > b.b2:
            k2s = [k2_lo + (k2_hi - k2_lo) * i / m for i in range(m + 1)]
            for sgn, name in ((1.0, "delta-zero-upper"), (-1.0, "delta-zero-lower")):
                pts = []
                for k2 in k2s:
                    rad = (b.b1 - b.b2) * (k2 - b.b2)
                    if rad < 0.0:
                        pts.append((math.nan, math.nan))
                        continue
                    pts.append((2.0 * b.b2 - k2 + sgn * 2.0 * math.sqrt(rad), k2))
                curves.append((name, pts))
        else:
            k1s = ks
            for sgn, name in ((1.0, "delta-zero-upper"), (-1.0, "delta-zero-lower")):
                pts = []
                for k1 in k1s:
                    rad = (b.b2 - b.b1) * (k1 - b.b1)
                    if rad < 0.0:
                        pts.append((math.nan, math.nan))
                        continue
                    pts.append((k1, 2.0 * b.b1 - k1 + sgn * 2.0 * math.sqrt(rad)))
                curves.append((name, pts))
        curves.append(
            ("sum-eq-2bmax", [(k1, 2.0 * hi - k1) for k1 in ks])
        )
    for name, pts in curves:
        for run in _clip_polyline(pts, k1_lo, k1_hi, k2_lo, k2_hi):
            coords = " ".join(f"{_fmt(x_of(p[0]))},{_fmt(y_of(p[1]))}" for p in run)
            parts.append(
                f'<polyline class="{name}" points="{coords}" stroke="#111111" '
                f'stroke-width="2" fill="none"/>'
            )

    parts.append(
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="none" '
        f'stroke="{_FRAME_STROKE}" stroke-width="1.5"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

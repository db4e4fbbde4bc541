"""Deterministic SVG emission for disk-domain plots.

Fixed 800x800 viewport with the unit disk mapped to 760 px; all styling
constants live here so repeated runs produce byte-identical documents.
Contours come from a marching-squares pass over the polar value lattice
with linear interpolation along cell edges and angular wrap-around.
"""

from __future__ import annotations

import math

import numpy as np

VIEW = 800
SCALE = 380.0
_HALF = VIEW / 2.0

CURVE_STROKE = "#1f6fb4"
LIMIT_STROKE = "#c44e52"
CONTOUR_STROKE = "#999999"
BOUNDARY_STROKE = "#222222"
MARKER_FILL = "#c44e52"


def _px(x: float, y: float) -> str:
    return f"{_HALF + SCALE * x:.2f},{_HALF - SCALE * y:.2f}"


class Canvas:
    """Collects SVG elements over the unit-disk viewport."""

    def __init__(self):
        self._parts: list[str] = []

    def polyline(self, xy, stroke=CURVE_STROKE, width=1.2, dash=None):
        pts = " ".join(_px(x, y) for x, y in np.asarray(xy))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self._parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}"'
            f' stroke-width="{width}"{extra}/>')

    def circle(self, radius, stroke=BOUNDARY_STROKE, width=1.5, fill="none"):
        self._parts.append(
            f'<circle cx="{_HALF:.2f}" cy="{_HALF:.2f}" r="{SCALE * radius:.2f}"'
            f' fill="{fill}" stroke="{stroke}" stroke-width="{width}"/>')

    def dot(self, x, y, radius=3.0, fill=MARKER_FILL):
        cx, cy = _px(x, y).split(",")
        self._parts.append(
            f'<circle cx="{cx}" cy="{cy}" r="{radius:.1f}" fill="{fill}"/>')

    def segments(self, segs, stroke=CONTOUR_STROKE, width=0.8):
        if not segs:
            return
        d = " ".join(f"M {_px(x0, y0)} L {_px(x1, y1)}"
                     for (x0, y0), (x1, y1) in segs)
        self._parts.append(
            f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>')

    def to_svg(self) -> str:
        body = "\n".join(self._parts)
        return (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{VIEW}" height="{VIEW}"'
            f' viewBox="0 0 {VIEW} {VIEW}">\n'
            f'<rect width="{VIEW}" height="{VIEW}" fill="white"/>\n'
            f"{body}\n</svg>\n")


# vertex bits: 1 = (i, j), 2 = (i+1, j), 4 = (i+1, j+1), 8 = (i, j+1);
# edges: 0 between vertices 1-2, 1 between 2-4, 2 between 4-8, 3 between 8-1
_CASES = {
    1: [(0, 3)], 2: [(0, 1)], 3: [(1, 3)], 4: [(1, 2)],
    6: [(0, 2)], 7: [(2, 3)], 8: [(2, 3)], 9: [(0, 2)],
    11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(0, 3)],
}


def contour_segments(values, radii, thetas, level):
    """Marching squares on the polar lattice; returns xy segment pairs."""
    v = np.asarray(values, dtype=float)
    radii = np.asarray(radii, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    n_r, n_t = v.shape
    dth = 2.0 * math.pi / n_t
    above = v > level
    jp = (np.arange(n_t) + 1) % n_t
    code = (above[:-1, :].astype(np.int8)
            + 2 * above[1:, :]
            + 4 * above[1:, :][:, jp]
            + 8 * above[:-1, :][:, jp])
    cells = np.argwhere((code != 0) & (code != 15))

    def edge_xy(i, j, edge):
        th0 = thetas[j]
        j1 = (j + 1) % n_t
        if edge == 0:
            a, b = v[i, j], v[i + 1, j]
            t = (level - a) / (b - a)
            r, th = radii[i] + t * (radii[i + 1] - radii[i]), th0
        elif edge == 1:
            a, b = v[i + 1, j], v[i + 1, j1]
            t = (level - a) / (b - a)
            r, th = radii[i + 1], th0 + t * dth
        elif edge == 2:
            a, b = v[i + 1, j1], v[i, j1]
            t = (level - a) / (b - a)
            r, th = radii[i + 1] + t * (radii[i] - radii[i + 1]), th0 + dth
        else:
            a, b = v[i, j1], v[i, j]
            t = (level - a) / (b - a)
            r, th = radii[i], th0 + (1.0 - t) * dth
        return r * math.cos(th), r * math.sin(th)

    segs = []
    for i, j in cells:
        c = int(code[i, j])
        if c in (5, 10):
            center = 0.25 * (v[i, j] + v[i + 1, j]
                             + v[i + 1, (j + 1) % n_t] + v[i, (j + 1) % n_t])
            if c == 5:
                pairs = [(0, 1), (2, 3)] if center > level else [(0, 3), (1, 2)]
            else:
                pairs = [(0, 3), (1, 2)] if center > level else [(0, 1), (2, 3)]
        else:
            pairs = _CASES[c]
        for e0, e1 in pairs:
            segs.append((edge_xy(i, j, e0), edge_xy(i, j, e1)))
    return segs

"""Contour extraction, SVG output, and figure bundle determinism."""

import hashlib
import math
import os

import numpy as np
import pytest

from brachisto import figures, svgplot
from brachisto.errors import OutOfRange


def test_contours_of_radial_field_are_circles():
    radii = np.linspace(0.0, 1.0, 41)
    thetas = np.linspace(0.0, 2.0 * math.pi, 80, endpoint=False)
    values = np.broadcast_to(radii[:, None], (41, 80)).copy()
    segs = svgplot.contour_segments(values, radii, thetas, 0.5)
    assert len(segs) == 80
    pts = np.asarray(segs).reshape(-1, 2)
    r = np.hypot(pts[:, 0], pts[:, 1])
    assert np.max(np.abs(r - 0.5)) < 1e-12


def test_contours_of_planar_field_are_straight():
    # V = x has the zero level set x = 0; interpolation along radial and
    # arc cell edges is linear in the coordinates, so the crossing points
    # must sit on the line exactly.
    radii = np.linspace(0.2, 1.0, 33)
    thetas = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
    values = radii[:, None] * np.cos(thetas)[None, :]
    segs = svgplot.contour_segments(values, radii, thetas, 0.0)
    pts = np.asarray(segs).reshape(-1, 2)
    assert len(segs) > 0
    assert np.max(np.abs(pts[:, 0])) < 1e-9


def test_contour_wraps_across_the_angular_seam():
    radii = np.linspace(0.0, 1.0, 11)
    thetas = np.linspace(0.0, 2.0 * math.pi, 12, endpoint=False)
    # Peak centred on the seam angle theta = 0.
    values = radii[:, None] * np.cos(thetas)[None, :]
    segs = svgplot.contour_segments(values, radii, thetas, 0.9)
    assert segs, "level near the seam peak must still produce segments"
    pts = np.asarray(segs).reshape(-1, 2)
    assert np.any(pts[:, 1] > 0) and np.any(pts[:, 1] < 0)


def test_canvas_svg_is_deterministic():
    def draw():
        c = svgplot.Canvas()
        c.circle(1.0)
        c.polyline([(0.0, 0.0), (0.5, 0.5), (0.9, 0.1)])
        c.dot(0.3, -0.4)
        c.segments([((0.0, 0.1), (0.2, 0.3))])
        return c.to_svg()

    a, b = draw(), draw()
    assert a == b
    assert a.startswith("<svg") and a.rstrip().endswith("</svg>")


def test_builders_produce_expected_panels():
    b = figures.build("fig2")
    assert [p["name"] for p in b["panels"]] == ["members"]
    panel = b["panels"][0]
    assert len(panel["curves"]) == 16
    assert len(panel["markers"]) == 16
    # Apex markers sit at the turning radius of each member.
    for entry, (x, y) in zip(panel["curves"], panel["markers"]):
        assert math.hypot(x, y) == pytest.approx(np.min(entry["r"]), abs=1e-9)

    b = figures.build("fig4")
    labels = [c["label"] for c in b["panels"][0]["curves"]]
    assert labels == ["riding_D=0.0204", "clearing_D=0.2300", "tangent_D=0.1250"]
    assert b["panels"][0]["circles"] == [1.0, 0.5]

    b = figures.build("fig5")
    assert [p["name"] for p in b["panels"]] == ["rim_terminals", "inner_terminals"]
    assert len(b["panels"][0]["curves"]) == 10
    assert len(b["panels"][1]["curves"]) == 20

    with pytest.raises(OutOfRange):
        figures.build("fig7")


def _hashes(outdir):
    out = {}
    for fn in sorted(os.listdir(outdir)):
        with open(os.path.join(outdir, fn), "rb") as fh:
            out[fn] = hashlib.sha256(fh.read()).hexdigest()
    return out


def test_emit_writes_stable_artifacts(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for name in ("fig2", "fig4", "fig5"):
        figures.emit(figures.build(name), str(a))
        figures.emit(figures.build(name), str(b))
    ha, hb = _hashes(a), _hashes(b)
    assert ha == hb
    assert "fig2_members_curves.csv" in ha
    assert "fig4_members_markers.csv" in ha
    assert "fig5_rim_terminals.svg" in ha
    header = (a / "fig2_members_curves.csv").read_text().splitlines()[0]
    assert header == "label,s,r,theta,t_cum"


def test_emit_accepts_plain_list_bundles(tmp_path):
    # Bundles round-tripped through JSON arrive as lists, not arrays.
    bundle = figures.build("fig4")
    for panel in bundle["panels"]:
        for entry in panel["curves"]:
            for key in ("s", "r", "theta", "t_cum"):
                entry[key] = [float(v) for v in entry[key]]
    paths = figures.emit(bundle, str(tmp_path))
    assert all(os.path.exists(p) for p in paths)

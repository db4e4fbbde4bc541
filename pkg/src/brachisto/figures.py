"""Reproduction presets for the reference figure set.

Each builder returns a plain bundle (dict of panels) that serializes to
JSON untouched, so the HTTP service can ship it and the CLI can render it.
emit() turns a bundle into deterministic CSV and SVG files: float text uses
repr-stable formatting and iteration order is fixed, so repeated runs
produce byte-identical artifacts.
"""

from __future__ import annotations

import math
import os

import numpy as np

from . import svgplot
from .annulus import family_member, foliate_annulus, tangent_params
from .errors import OutOfRange
from .field import FAMILIES, value_grid
from .strong import critical_radius, max_angle, sample_strong, shoot
from .weak import WeakSolution, sample_weak

N_LEVELS = 12


def _curve_entry(label, curve):
    return {
        "label": label,
        "s": np.asarray(curve.s),
        "r": np.asarray(curve.r),
        "theta": np.asarray(curve.theta),
        "t_cum": np.asarray(curve.t_cum),
    }


def _grid_entry(v):
    return {
        "epsilon": v.epsilon,
        "n_r": v.n_r,
        "n_theta": v.n_theta,
        "values": v.values,
        "source_mask": v.source_mask,
    }


def _panel(name, curves, grid=None, markers=(), circles=(1.0,)):
    return {
        "name": name,
        "curves": curves,
        "grid": grid,
        "markers": [list(m) for m in markers],
        "circles": list(circles),
    }


def smooth_family_panel():
    """Sixteen smooth members, terminal angles even in [-2pi/3, 2pi/3]."""
    angles = np.linspace(-2.0 * math.pi / 3.0, 2.0 * math.pi / 3.0, 18)[1:-1]
    curves, markers = [], []
    for theta_f in angles:
        sol = shoot(float(theta_f))
        curves.append(_curve_entry(f"theta_f={theta_f:.6f}", sample_strong(sol, 601)))
        apex = 0.5 * sol.theta_f
        markers.append((sol.r_c * math.cos(apex), sol.r_c * math.sin(apex)))
    return _panel("members", curves, markers=markers)


def fig2():
    return {"name": "fig2", "panels": [smooth_family_panel()]}


def fig3():
    weak_curves = []
    for theta_f in np.linspace(-math.pi, math.pi, 16):
        w = sample_weak(WeakSolution(float(theta_f), 1.0), 601)
        weak_curves.append(_curve_entry(f"theta_f={theta_f:.6f}", w))
    grid = value_grid(0.0, 200, 400, 512, n_samples=1201)
    display = []
    for theta_f in np.linspace(-math.pi, math.pi, 34)[1:-1]:
        theta_f = float(theta_f)
        if abs(theta_f) < 2.0 * math.pi / 3.0:
            c = sample_strong(shoot(theta_f), 601)
        else:
            c = sample_weak(WeakSolution(theta_f, 1.0), 601)
        display.append(_curve_entry(f"theta_f={theta_f:.6f}", c))
    return {"name": "fig3", "panels": [
        _panel("weak_family", weak_curves),
        _panel("foliation_contours", display, grid=_grid_entry(grid)),
    ]}


def fig4():
    eps = 0.5
    d_eps, theta_c = tangent_params(eps)
    specs = [
        ("riding", 0.0204, 2.0 * math.pi / 3.0),
        ("clearing", 0.2300, max_angle(0.2300)),
        ("tangent", d_eps, 2.0 * math.pi / 3.0),
    ]
    curves, markers = [], []
    for label, d, theta_f in specs:
        c = family_member(eps, d, theta_f, 1201)
        curves.append(_curve_entry(f"{label}_D={d:.4f}", c))
        sweep = c.params.get("contact_sweep")
        if sweep is not None:
            markers.append((eps * math.cos(sweep), eps * math.sin(sweep)))
        else:
            r_c = critical_radius(d)
            apex = 0.5 * c.params["theta_f"]
            markers.append((r_c * math.cos(apex), r_c * math.sin(apex)))
    return {"name": "fig4", "panels": [
        _panel("members", curves, markers=markers, circles=(1.0, eps)),
    ]}


def fig5():
    eps = 0.5
    sols = foliate_annulus(eps, 10, 601)
    rim = [_curve_entry(f"rim_{k}", s.curve) for k, s in enumerate(sols[:10])]
    inner = [_curve_entry(f"seam_{k}", s.curve) for k, s in enumerate(sols[10:20])]
    inner += [_curve_entry(f"ring_{k}", s.curve) for k, s in enumerate(sols[20:])]
    return {"name": "fig5", "panels": [
        _panel("rim_terminals", rim, circles=(1.0, eps)),
        _panel("inner_terminals", inner, circles=(1.0, eps)),
    ]}


def fig6():
    panels = []
    for eps in (0.75, 0.5, 0.25, 0.1):
        grid = value_grid(eps, 150, 300, 384, n_samples=1201)
        curves = []
        for k, s in enumerate(foliate_annulus(eps, 4, 601)):
            curves.append(_curve_entry(f"t{k}", s.curve))
        panels.append(_panel(f"eps{eps:g}".replace(".", "_"), curves,
                             grid=_grid_entry(grid), circles=(1.0, eps)))
    return {"name": "fig6", "panels": panels}


BUILDERS = {"fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5, "fig6": fig6}


def build(name: str) -> dict:
    if name not in BUILDERS:
        raise OutOfRange(f"unknown figure {name!r}; choose from {sorted(BUILDERS)}")
    return BUILDERS[name]()


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _levels(values):
    vmin = float(np.min(values))
    vmax = float(np.max(values))
    return np.linspace(vmin, vmax, N_LEVELS + 2)[1:-1]


def emit(bundle: dict, outdir: str) -> list[str]:
    """Write the bundle's CSV and SVG artifacts; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    name = bundle["name"]
    written = []
    for panel in bundle["panels"]:
        stem = f"{name}_{panel['name']}"
        rows = ["label,s,r,theta,t_cum"]
        for entry in panel["curves"]:
            label = entry["label"]
            for s, r, th, t in zip(entry["s"], entry["r"], entry["theta"],
                                   entry["t_cum"]):
                rows.append(f"{label},{s:.12g},{r:.12g},{th:.12g},{t:.12g}")
        written.append(_write(os.path.join(outdir, stem + "_curves.csv"),
                              "\n".join(rows) + "\n"))
        if panel["markers"]:
            rows = ["x,y"] + [f"{x:.12g},{y:.12g}" for x, y in panel["markers"]]
            written.append(_write(os.path.join(outdir, stem + "_markers.csv"),
                                  "\n".join(rows) + "\n"))
        grid = panel.get("grid")
        if grid is not None:
            written.append(_write(os.path.join(outdir, stem + "_grid.csv"),
                                  grid_csv(grid)))
        written.append(_write(os.path.join(outdir, stem + ".svg"),
                              panel_svg(panel)))
    return written


def grid_csv(grid) -> str:
    eps = float(grid["epsilon"])
    n_r, n_theta = int(grid["n_r"]), int(grid["n_theta"])
    values = np.asarray(grid["values"], dtype=float)
    mask = np.asarray(grid["source_mask"], dtype=int)
    radii = np.linspace(eps, 1.0, n_r)
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    rows = ["r,theta,value,family"]
    for i in range(n_r):
        for j in range(n_theta):
            rows.append(f"{radii[i]:.12g},{thetas[j]:.12g},"
                        f"{values[i, j]:.12g},{FAMILIES[mask[i, j]]}")
    return "\n".join(rows) + "\n"


def panel_svg(panel) -> str:
    canvas = svgplot.Canvas()
    grid = panel.get("grid")
    if grid is not None:
        eps = float(grid["epsilon"])
        values = np.asarray(grid["values"], dtype=float)
        radii = np.linspace(eps, 1.0, int(grid["n_r"]))
        thetas = np.linspace(0.0, 2.0 * math.pi, int(grid["n_theta"]),
                             endpoint=False)
        for level in _levels(values):
            canvas.segments(
                svgplot.contour_segments(values, radii, thetas, float(level)))
    for rad in panel["circles"]:
        canvas.circle(float(rad))
    for entry in panel["curves"]:
        r = np.asarray(entry["r"], dtype=float)
        th = np.asarray(entry["theta"], dtype=float)
        canvas.polyline(np.column_stack([r * np.cos(th), r * np.sin(th)]))
    for x, y in panel["markers"]:
        canvas.dot(float(x), float(y))
    return canvas.to_svg()

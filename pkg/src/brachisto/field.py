"""Minimal-time value function sampled on a polar grid.

The grid is built from the solution foliation itself: every curve sample
carries its cumulative time, and each grid node takes the estimate from the
closest sample, corrected to first order along the local front direction
(the travel-time gradient has magnitude sqrt(r/(1-r)) and points along the
curve tangent).  Nodes no sample came near are filled by inverse-distance
interpolation of the same first-order estimates from the nearest samples.
Boundary rings are special: the outer rim (and the obstacle ring, when
present) is completed by periodic interpolation in theta from its own
deposited nodes, since radial extrapolation degenerates there.

Two diagnostics probe the construction.  eikonal_residual checks the
front-speed identity |grad V|^2 = r/(1-r) with central differences, in the
relative form | |grad V|^2 (1-r)/r - 1 |.  orthogonality_check measures the
angle between curve tangents and the interpolated gradient, which should
vanish for a family of time-minimal paths.  Both skip bands where the
identity cannot hold discretely: the rim (the speed vanishes), the inner
tenth of the radial span (center crowding, or the obstacle boundary
layer), the seam at theta = pi where the mirror families meet, and a few
rings at the grid edge where one-sided differences pollute the stencil.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .annulus import foliate_annulus, solve_constrained
from .errors import GridTooCoarse, InsufficientCoverage, OutOfRange
from .geometry import PolarPoint, SampledCurve, reflected
from .strong import sample_strong, shoot
from .weak import WeakSolution, sample_weak

FAMILIES = ("strong", "weak", "constrained")

# transport factor sqrt(r/(1-r)) is capped near the rim where the estimate
# would otherwise blow up; the rim ring has its own 1-d fill
_CAP_R = 0.9995
_EDGE_RINGS = 3


@dataclass(frozen=True)
class ValueGrid:
    """Minimal time of flight from (1, 0) on an n_r x n_theta polar grid.

    Rings span [epsilon, 1] inclusive; angles cover [0, 2pi) with theta = 0
    on the grid.  source_mask holds per-node indices into FAMILIES, filled
    marks nodes whose value came from interpolation rather than a deposit.
    """

    epsilon: float
    n_r: int
    n_theta: int
    values: np.ndarray
    source_mask: np.ndarray
    filled: np.ndarray

    def __post_init__(self):
        if self.n_r < 16 or self.n_theta < 16:
            raise OutOfRange("grid resolutions must be at least 16")
        if not (0.0 <= self.epsilon < 1.0):
            raise OutOfRange(f"inner radius {self.epsilon} outside [0, 1)")
        if self.values.shape != (self.n_r, self.n_theta):
            raise OutOfRange("values shape does not match resolutions")
        if self.values.min() < 0.0:
            raise OutOfRange("negative travel time on the grid")
        if abs(self.values[-1, 0]) > 1e-12:
            raise OutOfRange("value at the release point (1, 0) must be 0")
        gap = np.abs(self.values - self.values[:, _mirror(self.n_theta)]).max()
        if gap > 1e-6:
            raise OutOfRange(f"grid not symmetric under theta -> -theta ({gap:.2e})")

    @property
    def radii(self) -> np.ndarray:
        return np.linspace(self.epsilon, 1.0, self.n_r)

    @property
    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, self.n_theta, endpoint=False)


def _mirror(n_theta):
    return (-np.arange(n_theta)) % n_theta


def foliation(epsilon: float, n_curves: int, n_samples: int = 2401) -> list[SampledCurve]:
    """Dense family of minimal curves covering the disk or annulus.

    For the free disk, terminal angles ladder (-pi, pi); smooth members
    serve |theta_f| < 2pi/3 and through-origin members the rest.  For an
    annulus the three obstacle regime families are laddered, the radial
    member added, and everything mirrored across the axis.
    """
    if n_curves < 64:
        raise OutOfRange("foliation needs at least 64 curves")
    curves = []
    if epsilon == 0.0:
        for k in range(n_curves):
            theta_f = -math.pi + (k + 0.5) * 2.0 * math.pi / n_curves
            if abs(theta_f) < 2.0 * math.pi / 3.0:
                curves.append(sample_strong(shoot(theta_f), n_samples))
            else:
                curves.append(sample_weak(WeakSolution(theta_f, 1.0), n_samples | 1))
    else:
        sols = foliate_annulus(epsilon, max(n_curves // 6, 4), n_samples)
        base = [s.curve for s in sols]
        base.append(solve_constrained(epsilon, PolarPoint(epsilon, 0.0), n_samples).curve)
        for c in base:
            curves.append(c)
            curves.append(reflected(c))
    return curves


def _family_code(curve: SampledCurve, epsilon: float) -> int:
    fam = curve.params.get("family", "constrained" if epsilon > 0.0 else "strong")
    if fam not in FAMILIES:
        fam = "constrained"
    return FAMILIES.index(fam)


def _transported(curve: SampledCurve):
    """Per-sample front-gradient estimate: tangent scaled by sqrt(r/(1-r))."""
    xy = curve.xy
    tan = np.gradient(xy, axis=0)
    norm = np.linalg.norm(tan, axis=1)
    norm[norm == 0.0] = 1.0
    tan = tan / norm[:, None]
    r = np.clip(curve.r, 1e-12, _CAP_R)
    return tan * np.sqrt(r / (1.0 - r))[:, None]


def value_grid(epsilon: float, n_r: int, n_theta: int, n_curves: int,
               n_samples: int = 2401) -> ValueGrid:
    """Build the value grid by depositing foliation times onto nodes.

    Each node keeps the first-order estimate from the closest curve sample;
    untouched nodes are filled by inverse-distance-squared interpolation of
    the same estimates from the 8 nearest samples.  Raises
    InsufficientCoverage when some node has no sample within 3 cells.
    """
    if n_r < 16 or n_theta < 16:
        raise OutOfRange("grid resolutions must be at least 16")
    if n_curves < 64:
        raise OutOfRange("need at least 64 foliation curves")
    curves = foliation(epsilon, n_curves, n_samples)
    radii = np.linspace(epsilon, 1.0, n_r)
    thetas = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    dr = radii[1] - radii[0]
    dth = thetas[1] - thetas[0]

    flat_v = np.full(n_r * n_theta, np.inf)
    flat_d = np.full(n_r * n_theta, np.inf)
    flat_f = np.full(n_r * n_theta, -1, dtype=np.int8)
    all_xy, all_t, all_g, all_fam = [], [], [], []
    for c in curves:
        code = _family_code(c, epsilon)
        grad = _transported(c)
        xy = c.xy
        ir = np.clip(np.round((c.r - epsilon) / dr).astype(np.int64), 0, n_r - 1)
        it = np.mod(np.round(np.mod(c.theta, 2.0 * math.pi) / dth).astype(np.int64), n_theta)
        flat = ir * n_theta + it
        ddx = radii[ir] * np.cos(thetas[it]) - xy[:, 0]
        ddy = radii[ir] * np.sin(thetas[it]) - xy[:, 1]
        est = c.t_cum + ddx * grad[:, 0] + ddy * grad[:, 1]
        dist = ddx * ddx + ddy * ddy
        # keep only this curve's closest sample per node, then compare
        # against the best distance seen so far across curves
        order = np.lexsort((dist, flat))
        keep = np.ones(len(order), dtype=bool)
        keep[1:] = flat[order][1:] != flat[order][:-1]
        sel = order[keep]
        sel = sel[dist[sel] < flat_d[flat[sel]]]
        flat_v[flat[sel]] = est[sel]
        flat_d[flat[sel]] = dist[sel]
        flat_f[flat[sel]] = code
        all_xy.append(xy)
        all_t.append(np.asarray(c.t_cum))
        all_g.append(grad)
        all_fam.append(np.full(len(xy), code, dtype=np.int8))

    values = flat_v.reshape(n_r, n_theta)
    mask = flat_f.reshape(n_r, n_theta).copy()
    filled = ~np.isfinite(values)

    if epsilon == 0.0:
        # the innermost ring is one physical point; broadcast its best deposit
        have = np.isfinite(values[0])
        if have.any():
            j = int(np.argmin(np.where(have, values[0], np.inf)))
            values[0, :] = values[0, j]
            mask[0, :] = mask[0, j]
    rings = [n_r - 1] if epsilon == 0.0 else [0, n_r - 1]
    for ring in rings:
        row = values[ring]
        have = np.isfinite(row)
        if have.any() and not have.all():
            values[ring, ~have] = np.interp(
                thetas[~have], thetas[have], row[have], period=2.0 * math.pi)
            gap = np.abs(thetas[~have, None] - thetas[have][None, :])
            gap = np.minimum(gap, 2.0 * math.pi - gap)
            mask[ring, ~have] = mask[ring, have][np.argmin(gap, axis=1)]

    samples = np.concatenate(all_xy)
    times = np.concatenate(all_t)
    grads = np.concatenate(all_g)
    fams = np.concatenate(all_fam)
    miss = ~np.isfinite(values)
    if miss.any():
        rr, tt = np.meshgrid(radii, thetas, indexing="ij")
        qx = (rr * np.cos(tt))[miss]
        qy = (rr * np.sin(tt))[miss]
        d, j = cKDTree(samples).query(np.column_stack([qx, qy]), k=8, workers=-1)
        reach = 3.0 * np.hypot(dr, rr[miss] * dth)
        if (d[:, 0] > reach).any():
            worst = int(np.argmax(d[:, 0] / reach))
            raise InsufficientCoverage(
                f"node at r={rr[miss][worst]:.3f} has no sample within 3 cells "
                f"(nearest {d[worst, 0]:.4f})")
        w = 1.0 / np.maximum(d, 1e-12) ** 2
        est = (times[j] + (qx[:, None] - samples[j][:, :, 0]) * grads[j][:, :, 0]
               + (qy[:, None] - samples[j][:, :, 1]) * grads[j][:, :, 1])
        values[miss] = (w * est).sum(axis=1) / w.sum(axis=1)
        mask[miss] = fams[j[:, 0]]

    mir = _mirror(n_theta)
    values_m = values[:, mir]
    swap = values_m < values
    mask = np.where(swap, mask[:, mir], mask)
    filled = np.where(swap, filled[:, mir], filled)
    values = np.minimum(values, values_m)
    values = np.maximum(values, 0.0)
    return ValueGrid(epsilon, n_r, n_theta, values, mask, filled)


def _gradient_fields(v: ValueGrid):
    dr = (1.0 - v.epsilon) / (v.n_r - 1)
    dth = 2.0 * math.pi / v.n_theta
    vr = np.gradient(v.values, dr, axis=0)
    vt = (np.roll(v.values, -1, axis=1) - np.roll(v.values, 1, axis=1)) / (2.0 * dth)
    return vr, vt


def _inner_band(epsilon: float) -> float:
    # inner tenth of the radial span; reduces to r < 0.1 on the free disk
    # and trims the boundary layer hugging the obstacle ring otherwise
    return epsilon + 0.1 * (1.0 - epsilon)


def _included(v: ValueGrid):
    """Nodes where the front-speed identity is checked.

    Excludes the rim band r > 0.9 (speed vanishes), the inner tenth of the
    radial span, the seam |theta - pi| < 0.2 where the mirror families
    meet, and _EDGE_RINGS rings at each radial edge of the grid.
    """
    r = v.radii[:, None]
    th = v.thetas[None, :]
    i = np.arange(v.n_r)[:, None]
    return ((r > _inner_band(v.epsilon)) & (r < 0.9)
            & (np.abs(th - math.pi) >= 0.2)
            & (i >= _EDGE_RINGS) & (i < v.n_r - _EDGE_RINGS))


def eikonal_residual(v: ValueGrid):
    """Max of | |grad V|^2 (1-r)/r - 1 | over checked nodes, plus the field.

    The returned array is NaN outside the checked region.  Raises
    GridTooCoarse when fewer than 100 nodes survive the exclusions.
    """
    inc = _included(v)
    if inc.sum() < 100:
        raise GridTooCoarse(f"only {int(inc.sum())} nodes outside exclusion bands")
    vr, vt = _gradient_fields(v)
    r = np.maximum(v.radii[:, None], 1e-12)
    g2 = vr ** 2 + (vt / r) ** 2
    res = np.abs(g2 * (1.0 - r) / r - 1.0)
    field = np.where(inc, res, np.nan)
    return float(res[inc].max()), field


def _bilinear(a: np.ndarray, fi: np.ndarray, fj: np.ndarray, n_theta: int):
    i0 = np.clip(fi.astype(np.int64), 0, a.shape[0] - 2)
    u = fi - i0
    j0 = np.mod(fj.astype(np.int64), n_theta)
    w = fj - np.floor(fj)
    j1 = (j0 + 1) % n_theta
    return (a[i0, j0] * (1 - u) * (1 - w) + a[i0 + 1, j0] * u * (1 - w)
            + a[i0, j1] * (1 - u) * w + a[i0 + 1, j1] * u * w)


def value_at(v: ValueGrid, r, theta):
    """Bilinear interpolation of the grid at polar points (vectorized)."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if (r < v.epsilon - 1e-9).any() or (r > 1.0 + 1e-9).any():
        raise OutOfRange("query radius outside the grid annulus")
    dr = (1.0 - v.epsilon) / (v.n_r - 1)
    dth = 2.0 * math.pi / v.n_theta
    fi = np.clip((r - v.epsilon) / dr, 0.0, v.n_r - 1 - 1e-12)
    fj = np.mod(theta, 2.0 * math.pi) / dth
    return _bilinear(v.values, fi, fj, v.n_theta)


def orthogonality_check(v: ValueGrid, curves) -> float:
    """Worst angle (degrees) between curve tangents and the grid gradient.

    Minimal curves should run parallel to grad V, so the deviation is the
    angle from 0.  Samples inside the exclusion bands of eikonal_residual
    are skipped; raises GridTooCoarse if nothing survives.
    """
    vr_g, vt_g = _gradient_fields(v)
    dr = (1.0 - v.epsilon) / (v.n_r - 1)
    dth = 2.0 * math.pi / v.n_theta
    r_lo = max(_inner_band(v.epsilon), v.epsilon + _EDGE_RINGS * dr)
    r_hi = min(0.9, 1.0 - _EDGE_RINGS * dr)
    worst = -1.0
    for c in curves:
        r = c.r
        if (r < v.epsilon - 1e-6).any():
            raise OutOfRange("curve dips below the grid's inner radius")
        th = np.mod(c.theta, 2.0 * math.pi)
        tan = np.gradient(c.xy, axis=0)
        tnorm = np.linalg.norm(tan, axis=1)
        keep = ((r > r_lo) & (r < r_hi)
                & (np.abs(th - math.pi) >= 0.2) & (tnorm > 0.0))
        if not keep.any():
            continue
        fi = np.clip((r[keep] - v.epsilon) / dr, 0.0, v.n_r - 1 - 1e-12)
        fj = th[keep] / dth
        vr = _bilinear(vr_g, fi, fj, v.n_theta)
        vt = _bilinear(vt_g, fi, fj, v.n_theta)
        ct, st = np.cos(th[keep]), np.sin(th[keep])
        gx = vr * ct - vt / r[keep] * st
        gy = vr * st + vt / r[keep] * ct
        gn = np.hypot(gx, gy)
        ok = gn > 1e-9
        if not ok.any():
            continue
        cosang = ((tan[keep][:, 0] * gx + tan[keep][:, 1] * gy)
                  / (tnorm[keep] * np.maximum(gn, 1e-300)))[ok]
        dev = np.degrees(np.arccos(np.clip(np.abs(cosang), 0.0, 1.0)))
        worst = max(worst, float(dev.max()))
    if worst < 0.0:
        raise GridTooCoarse("no curve samples outside the exclusion bands")
    return worst

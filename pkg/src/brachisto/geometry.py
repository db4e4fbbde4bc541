"""Geometric primitives for descent curves on the unit disk.

A particle released at rest on the rim moves with speed sqrt(1/r - 1) at
radius r (energy conservation in the inverse-square field, dimensionless
units).  Everything downstream is built on three pieces defined here: the
point types, the sampled-curve container, and the travel-time functional
for sampled polylines.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import CurveNotAdmissible, EmptyCurve, OutOfRange

ADMISSIBLE_TOL = 1e-9
# A chord endpoint this close to the rim gets the closed-form radial time,
# because the speed vanishes there and a midpoint rule would blow up.
RIM_TOL = 1e-9


def speed(r):
    """Particle speed sqrt(1/r - 1) at radius r; vectorized, inf at r = 0."""
    return _speed_raw(np.clip(np.asarray(r, dtype=float), 0.0, 1.0))


def _speed_raw(r):
    with np.errstate(divide="ignore"):
        out = np.sqrt(np.divide(1.0 - r, r, out=np.full_like(r, np.inf), where=r > 0.0))
    return out


def radial_time(r):
    """Antiderivative of 1/speed along a radius: arcsin(sqrt r) - sqrt(r (1 - r)).

    radial_time(b) - radial_time(a) is the exact travel time of a straight
    radial descent from radius b to radius a (or the ascent time back).
    radial_time(1) = pi/2, the full rim-to-center drop.
    """
    r = np.clip(np.asarray(r, dtype=float), 0.0, 1.0)
    return np.arcsin(np.sqrt(r)) - np.sqrt(r * (1.0 - r))


def normalize_angle(theta: float) -> float:
    """Map an angle to [-pi, pi]."""
    t = math.remainder(theta, 2.0 * math.pi)
    # math.remainder returns values in [-pi, pi]; normalize the -pi tie to pi
    # so that the rim seam has one canonical representation on output.
    return t


@dataclass(frozen=True)
class PolarPoint:
    """Point of the closed unit disk in polar coordinates, theta in [-pi, pi]."""

    r: float
    theta: float

    def __post_init__(self):
        if not (-ADMISSIBLE_TOL <= self.r <= 1.0 + ADMISSIBLE_TOL):
            raise OutOfRange(f"radius {self.r} outside [0, 1]")
        object.__setattr__(self, "r", min(max(self.r, 0.0), 1.0))
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def to_cartesian(self) -> "CartPoint":
        return CartPoint(self.r * math.cos(self.theta), self.r * math.sin(self.theta))


@dataclass(frozen=True)
class CartPoint:
    """Cartesian point; radius() must not exceed 1 + 1e-9 for curve samples."""

    x: float
    y: float

    def radius(self) -> float:
        return math.hypot(self.x, self.y)

    def to_polar(self) -> PolarPoint:
        return PolarPoint(min(self.radius(), 1.0), math.atan2(self.y, self.x))


def _as_readonly(a):
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class SampledCurve:
    """Polyline approximation of a curve, parameterized by s in [0, 1].

    s is strictly increasing; sample positions stay inside the closed unit
    disk (tolerance 1e-9); t_cum, when present, is the cumulative travel
    time and is non-decreasing from 0.  params carries solver metadata
    (family, D, epsilon, ...) and rides along through serialization.
    """

    s: np.ndarray
    xy: np.ndarray
    t_cum: np.ndarray | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        s = _as_readonly(self.s)
        xy = _as_readonly(self.xy)
        if s.ndim != 1 or xy.shape != (s.size, 2):
            raise EmptyCurve("curve needs matching 1-d s and (n, 2) xy arrays")
        if s.size < 2:
            raise EmptyCurve("curve needs at least two samples")
        if not np.all(np.isfinite(s)) or not np.all(np.isfinite(xy)):
            raise CurveNotAdmissible("non-finite sample")
        if np.any(np.diff(s) <= 0.0):
            raise EmptyCurve("parameter s must be strictly increasing")
        if s[0] < -1e-12 or s[-1] > 1.0 + 1e-12:
            raise OutOfRange("parameter s must lie in [0, 1]")
        rad = np.hypot(xy[:, 0], xy[:, 1])
        if np.any(rad > 1.0 + ADMISSIBLE_TOL):
            raise CurveNotAdmissible(
                f"sample radius {rad.max():.12g} exceeds 1 + {ADMISSIBLE_TOL}"
            )
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "xy", xy)
        if self.t_cum is not None:
            t = _as_readonly(self.t_cum)
            if t.shape != s.shape:
                raise EmptyCurve("t_cum length mismatch")
            if abs(t[0]) > 1e-12 or np.any(np.diff(t) < -1e-12):
                raise OutOfRange("t_cum must be non-decreasing from 0")
            object.__setattr__(self, "t_cum", t)
        object.__setattr__(self, "params", dict(self.params))

    @classmethod
    def from_polar(cls, s, r, theta, t_cum=None, params=None) -> "SampledCurve":
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        xy = np.column_stack((r * np.cos(theta), r * np.sin(theta)))
        return cls(np.asarray(s, dtype=float), xy, t_cum, params or {})

    @property
    def n(self) -> int:
        return self.s.size

    @property
    def r(self) -> np.ndarray:
        return np.minimum(np.hypot(self.xy[:, 0], self.xy[:, 1]), 1.0)

    @property
    def theta(self) -> np.ndarray:
        return np.arctan2(self.xy[:, 1], self.xy[:, 0])

    def theta_unwrapped(self) -> np.ndarray:
        return np.unwrap(self.theta)

    def with_params(self, **extra) -> "SampledCurve":
        p = dict(self.params)
        p.update(extra)
        return SampledCurve(self.s, self.xy, self.t_cum, p)


def rotated(curve: SampledCurve, angle: float) -> SampledCurve:
    c, s = math.cos(angle), math.sin(angle)
    rot = np.array([[c, -s], [s, c]])
    return SampledCurve(curve.s, curve.xy @ rot.T, curve.t_cum, curve.params)


def reflected(curve: SampledCurve) -> SampledCurve:
    """Mirror about the x axis (theta -> -theta)."""
    xy = curve.xy.copy()
    xy[:, 1] = -xy[:, 1]
    return SampledCurve(curve.s, xy, curve.t_cum, curve.params)


_G3 = np.polynomial.legendre.leggauss(3)
_G8 = np.polynomial.legendre.leggauss(8)
_G3_X, _G3_W = 0.5 * (_G3[0] + 1.0), 0.5 * _G3[1]
_G8_X, _G8_W = 0.5 * (_G8[0] + 1.0), 0.5 * _G8[1]


def _piece_times(a, b):
    """Travel times of straight pieces a->b whose radius is monotone along each.

    Off the rim a 3-point Gauss rule on the line parameter suffices.  Pieces
    with an endpoint on the rim are integrated in tau with t = tau^2 anchored
    at that endpoint: the speed vanishes there like sqrt(1 - r), and the
    substitution turns the inverse-square-root blowup of 1/v into a smooth
    integrand (an 8-point rule then leaves errors far below sampling error).
    """
    ra = np.hypot(a[:, 0], a[:, 1])
    rb = np.hypot(b[:, 0], b[:, 1])
    seg = b - a
    length = np.hypot(seg[:, 0], seg[:, 1])

    touching = np.maximum(ra, rb) >= 1.0 - RIM_TOL
    out = np.zeros(len(a))

    plain = (~touching) & (length > 0.0)
    if np.any(plain):
        p, d = a[plain], seg[plain]
        pts = p[:, None, :] + _G3_X[None, :, None] * d[:, None, :]
        rho = np.clip(np.hypot(pts[..., 0], pts[..., 1]), 0.0, 1.0)
        with np.errstate(divide="ignore"):
            inv_v = np.where(rho > 0.0, 1.0 / _speed_raw(rho), 0.0)
        out[plain] = length[plain] * (inv_v @ _G3_W)

    rim = touching & (length > 0.0)
    if np.any(rim):
        swap = rb[rim] > ra[rim]
        anchor = np.where(swap[:, None], b[rim], a[rim])
        other = np.where(swap[:, None], a[rim], b[rim])
        d = other - anchor
        pts = anchor[:, None, :] + (_G8_X**2)[None, :, None] * d[:, None, :]
        rho = np.clip(np.hypot(pts[..., 0], pts[..., 1]), 0.0, 1.0 - 1e-17)
        integ = 2.0 * _G8_X[None, :] / _speed_raw(rho)
        out[rim] = length[rim] * (integ @ _G8_W)
    return out


def segment_times(xy) -> np.ndarray:
    """Per-segment travel times of the polyline xy, one entry per segment.

    Segments whose closest approach to the origin is interior are split
    there first, so each integrated piece has monotone radius (matters for
    through-origin curves where the speed diverges).
    """
    p = np.asarray(xy, dtype=float)[:-1]
    q = np.asarray(xy, dtype=float)[1:]
    d = q - p
    ll = np.einsum("ij,ij->i", d, d)
    with np.errstate(divide="ignore", invalid="ignore"):
        tstar = np.where(ll > 0.0, -np.einsum("ij,ij->i", p, d) / ll, 0.0)
    tstar = np.clip(tstar, 0.0, 1.0)
    c = p + tstar[:, None] * d
    return _piece_times(p, c) + _piece_times(c, q)


def tof_sampled(curve: SampledCurve) -> float:
    """Total travel time of the sampled curve (sum of segment times)."""
    times = segment_times(curve.xy)
    total_len = np.sum(np.hypot(*(curve.xy[1:] - curve.xy[:-1]).T))
    if total_len == 0.0:
        raise EmptyCurve("curve has zero arc length")
    return float(np.sum(times))


def fill_times(curve: SampledCurve) -> SampledCurve:
    """Copy of the curve with t_cum populated from the segment integrator."""
    times = segment_times(curve.xy)
    t = np.concatenate(([0.0], np.cumsum(times)))
    return SampledCurve(curve.s, curve.xy, t, curve.params)


def curve_distance(a: SampledCurve, b: SampledCurve) -> float:
    """One-sided sup-inf distance: sup over a's samples of the distance to b's."""
    tree = cKDTree(b.xy)
    d, _ = tree.query(a.xy, k=1)
    return float(np.max(d))


def resample(curve: SampledCurve, n: int) -> SampledCurve:
    """Arc-length-uniform resampling to n samples; endpoints preserved.

    t_cum is recomputed from the resampled polyline.
    """
    if n < 2:
        raise OutOfRange("resample needs n >= 2")
    seg = np.hypot(*(curve.xy[1:] - curve.xy[:-1]).T)
    arc = np.concatenate(([0.0], np.cumsum(seg)))
    if arc[-1] == 0.0:
        raise EmptyCurve("cannot resample a zero-length curve")
    targets = np.linspace(0.0, arc[-1], n)
    x = np.interp(targets, arc, curve.xy[:, 0])
    y = np.interp(targets, arc, curve.xy[:, 1])
    xy = np.column_stack((x, y))
    xy[0] = curve.xy[0]
    xy[-1] = curve.xy[-1]
    out = SampledCurve(np.linspace(0.0, 1.0, n), xy, None, curve.params)
    return fill_times(out)


CSV_HEADER = "s,x,y,r,theta,t_cum"


def curve_to_csv(curve: SampledCurve) -> str:
    """Serialize to CSV with 12 significant digits per field."""
    c = curve if curve.t_cum is not None else fill_times(curve)
    r = c.r
    theta = c.theta
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for i in range(c.n):
        row = (c.s[i], c.xy[i, 0], c.xy[i, 1], r[i], theta[i], c.t_cum[i])
        buf.write(",".join(f"{v:.12g}" for v in row) + "\n")
    return buf.getvalue()


def curve_from_csv(text: str, params=None) -> SampledCurve:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise OutOfRange("unexpected CSV header")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return SampledCurve(data[:, 0], data[:, 1:3], data[:, 5], params or {})


def curve_to_json_dict(curve: SampledCurve) -> dict:
    """JSON-ready record {params, samples}; samples are [s, x, y, r, theta, t_cum] rows."""
    c = curve if curve.t_cum is not None else fill_times(curve)
    r = c.r
    theta = c.theta
    samples = [
        [float(c.s[i]), float(c.xy[i, 0]), float(c.xy[i, 1]), float(r[i]), float(theta[i]), float(c.t_cum[i])]
        for i in range(c.n)
    ]
    return {"params": dict(c.params), "samples": samples}


def curve_from_json_dict(record: dict) -> SampledCurve:
    data = np.asarray(record["samples"], dtype=float)
    return SampledCurve(data[:, 0], data[:, 1:3], data[:, 5], dict(record.get("params", {})))

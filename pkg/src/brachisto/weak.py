"""Through-origin descent curves and the corner condition at the kink.

A weak family member drops radially from (1, 0) to the origin, then climbs
radially to (r_f cos theta_f, r_f sin theta_f).  Its travel time has the
closed form pi/2 + arcsin(sqrt(r_f)) - sqrt(r_f (1 - r_f)) and does not
depend on theta_f: the origin visit erases the angular cost.  This family
covers the sector |theta_f| >= 2*pi/3 that smooth members cannot reach.

The kink at the origin is legitimate: the momentum-like quantity
tangent / speed has magnitude sqrt(r / (1 - r)), which vanishes as r -> 0,
so both one-sided limits agree (at zero).  corner_residual measures that
agreement on any sampled curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CornerAtEndpoint, OutOfRange
from .geometry import SampledCurve, normalize_angle, radial_time


@dataclass(frozen=True)
class WeakSolution:
    """Two radial legs joined at the origin; terminal point (r_f, theta_f)."""

    theta_f: float
    r_f: float

    def __post_init__(self):
        if not (0.0 <= self.r_f <= 1.0):
            raise OutOfRange(f"terminal radius {self.r_f} outside [0, 1]")
        object.__setattr__(self, "theta_f", normalize_angle(self.theta_f))


def tof_weak(w: WeakSolution) -> float:
    """Closed-form travel time pi/2 + arcsin(sqrt r_f) - sqrt(r_f(1-r_f))."""
    return math.pi / 2.0 + float(radial_time(w.r_f))


def sample_weak(w: WeakSolution, n: int) -> SampledCurve:
    """Sample the two legs at n parameters; n odd so the origin is a sample."""
    if n < 3 or n % 2 == 0:
        raise OutOfRange("sample_weak needs odd n >= 3")
    s = np.linspace(0.0, 1.0, n)
    down = s <= 0.5
    r = np.where(down, 1.0 - 2.0 * s, (2.0 * s - 1.0) * w.r_f)
    theta = np.where(down, 0.0, w.theta_f)
    t_cum = np.where(
        down,
        math.pi / 2.0 - radial_time(np.abs(r)),
        math.pi / 2.0 + radial_time(np.abs(r)),
    )
    t_cum[0] = 0.0
    params = {
        "family": "weak",
        "theta_f": w.theta_f,
        "r_f": w.r_f,
        "tof": tof_weak(w),
    }
    return SampledCurve.from_polar(s, r, theta, t_cum, params)


def _position(curve: SampledCurve, s: float) -> np.ndarray:
    x = np.interp(s, curve.s, curve.xy[:, 0])
    y = np.interp(s, curve.s, curve.xy[:, 1])
    return np.array([x, y])


def _one_sided_momentum(curve: SampledCurve, s0: float, side: int, h: float):
    """Momentum estimate tangent/speed at parameter s0 + side*h."""
    p0 = _position(curve, s0)
    p1 = _position(curve, s0 + side * h)
    d = p1 - p0
    norm = math.hypot(d[0], d[1])
    if norm == 0.0:
        return np.zeros(2)
    r1 = min(math.hypot(p1[0], p1[1]), 1.0 - 1e-15)
    return side * (d / norm) * math.sqrt(r1 / (1.0 - r1))


def corner_residual(curve: SampledCurve, s_corner: float, h: float = 1e-7) -> float:
    """Jump magnitude of tangent/speed across s_corner.

    One-sided estimates at offsets h and h/2 are Richardson-combined.  h
    defaults small enough that the sqrt(r) momentum scale next to a
    through-origin corner sits well below the 1e-3 verification level.
    """
    if not (curve.s[0] + h < s_corner < curve.s[-1] - h):
        raise CornerAtEndpoint(f"corner parameter {s_corner} too close to an endpoint")
    before = 2.0 * _one_sided_momentum(curve, s_corner, -1, h / 2) - _one_sided_momentum(
        curve, s_corner, -1, h
    )
    after = 2.0 * _one_sided_momentum(curve, s_corner, +1, h / 2) - _one_sided_momentum(
        curve, s_corner, +1, h
    )
    jump = after - before
    return float(math.hypot(jump[0], jump[1]))

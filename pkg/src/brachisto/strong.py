"""Smooth descent curves that dip to a critical radius and climb back out.

The one-parameter family is indexed by D > 0 (squared angular momentum
scale).  A member descends from (1, 0) to its critical radius r_c - the
unique root in (0, 1) of g(r) = r^3 + 2 D r - 2 D - then ascends to the rim
mirror-symmetrically, sweeping a total angle max_angle(D) that decreases
from 2*pi/3 (D -> 0) to 0 (D -> inf).  Terminal angles with
|theta_f| >= 2*pi/3 are unreachable by this family.

The angle swept between radius r and the rim is

    theta(r) = integral_r^1 sqrt(2 D (1 - u)) / (u sqrt(g(u))) du

and the travel time of the same stretch is integral of
u^2 / sqrt(g(u) (1 - u)).  Both integrands have inverse-square-root
endpoint singularities; they are integrated after the substitutions
u = r_c + t^2 (apex) and u = 1 - w^2 (rim), which cancel the singular
factors exactly once g is written in the factored form
g(u) = (u - r_c)(u^2 + u r_c + r_c^2 + 2 D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrate import batch_gauss, cumulative_gauss, panel_grid, quad_tight
from .errors import NonPositiveD, OutOfRange, OutOfSector
from .geometry import SampledCurve

SECTOR_ANGLE = 2.0 * math.pi / 3.0
_EPS = np.finfo(float).eps


def _g(r, d):
    # r^3 - 2 d (1 - r): algebraically g, but without the 2dr vs 2d cancellation
    return r * r * r - 2.0 * d * (1.0 - r)


def _q(u, d, r_c):
    return u * u + u * r_c + r_c * r_c + 2.0 * d


def critical_radius(d: float) -> float:
    """Unique root of r^3 + 2 D r - 2 D in (0, 1); bisection plus Newton polish."""
    if not (d > 0.0) or not math.isfinite(d):
        raise NonPositiveD(f"D must be positive and finite, got {d}")
    lo, hi = 0.0, 1.0
    while hi - lo > 1e-14:
        mid = 0.5 * (lo + hi)
        if _g(mid, d) > 0.0:
            hi = mid
        else:
            lo = mid
    r = 0.5 * (lo + hi)
    for _ in range(3):
        r -= _g(r, d) / (3.0 * r * r + 2.0 * d)
        r = min(max(r, 1e-300), 1.0)
    return r


def _critical_radius_batch(d):
    d = np.asarray(d, dtype=float)
    lo = np.zeros_like(d)
    hi = np.ones_like(d)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        pos = mid * mid * mid - 2.0 * d * (1.0 - mid) > 0.0
        hi = np.where(pos, mid, hi)
        lo = np.where(pos, lo, mid)
    r = 0.5 * (lo + hi)
    for _ in range(3):
        r = r - (r**3 - 2.0 * d * (1.0 - r)) / (3.0 * r * r + 2.0 * d)
        r = np.clip(r, 1e-300, 1.0)
    return r


def d_from_rc(r_c: float) -> float:
    """Inverse map r_c -> D = r_c^3 / (2 (1 - r_c)); diverges as r_c -> 1."""
    if not (0.0 < r_c < 1.0):
        raise OutOfRange(f"critical radius must lie in (0, 1), got {r_c}")
    return r_c**3 / (2.0 * (1.0 - r_c))


@dataclass(frozen=True)
class StrongSolution:
    """Family member: parameter d, critical radius, branch sign, terminal angle."""

    d: float
    r_c: float
    branch: int
    theta_f: float

    def __post_init__(self):
        if not (self.d > 0.0) or not math.isfinite(self.d):
            raise NonPositiveD(f"D must be positive, got {self.d}")
        if self.branch not in (-1, 1):
            raise OutOfRange(f"branch must be +1 or -1, got {self.branch}")
        if not (0.0 < self.r_c < 1.0):
            raise OutOfRange(f"critical radius {self.r_c} outside (0, 1)")
        scale = 3.0 * self.r_c**2 + 2.0 * self.d
        if abs(_g(self.r_c, self.d)) > max(1e-12, 16.0 * _EPS * scale):
            raise OutOfRange("r_c does not solve the critical-radius cubic")
        if abs(self.d - d_from_rc(self.r_c)) > 1e-10 * max(1.0, self.d):
            raise OutOfRange("D and r_c are inconsistent")
        if not abs(self.theta_f) < SECTOR_ANGLE:
            raise OutOfSector(f"terminal angle {self.theta_f} outside the smooth sector")
        if self.branch * self.theta_f < -1e-12:
            raise OutOfRange("branch sign contradicts theta_f")

    @classmethod
    def from_d(cls, d: float, branch: int = 1) -> "StrongSolution":
        r_c = critical_radius(d)
        return cls(d, r_c, branch, branch * max_angle(d))


def _theta_integrand_t(d, r_c):
    def f(t):
        u = r_c + t * t
        return 2.0 * np.sqrt(2.0 * d * (1.0 - u) / _q(u, d, r_c)) / u

    return f


def _theta_integrand_w(d, r_c):
    root = math.sqrt(2.0 * d)

    def f(w):
        u = 1.0 - w * w
        return 2.0 * root * w * w / (u * np.sqrt((u - r_c) * _q(u, d, r_c)))

    return f


def _time_integrand_t(d, r_c):
    def f(t):
        u = r_c + t * t
        return 2.0 * u * u / np.sqrt(_q(u, d, r_c) * (1.0 - u))

    return f


def _time_integrand_w(d, r_c):
    def f(w):
        u = 1.0 - w * w
        return 2.0 * u * u / np.sqrt((u - r_c) * _q(u, d, r_c))

    return f


def max_angle(d: float) -> float:
    """Total swept angle of the D-member; decreasing, limits 2*pi/3 and 0."""
    if not (d > 0.0) or not math.isfinite(d):
        raise NonPositiveD(f"D must be positive and finite, got {d}")
    r_c = critical_radius(d)
    half = math.sqrt(0.5 * (1.0 - r_c))
    a = quad_tight(_theta_integrand_t(d, r_c), 0.0, half)
    b = quad_tight(_theta_integrand_w(d, r_c), 0.0, half)
    return 2.0 * (a + b)


def _max_angle_batch(d):
    """Vectorized max_angle on composite panels (used by the batch shooter)."""
    d = np.asarray(d, dtype=float)
    r_c = _critical_radius_batch(d)
    half = np.sqrt(0.5 * (1.0 - r_c))
    dc = d[:, None]
    rc = r_c[:, None]

    def f_t(t):
        u = rc + t * t
        return 2.0 * np.sqrt(2.0 * dc * (1.0 - u) / (u * u + u * rc + rc * rc + 2.0 * dc)) / u

    def f_w(w):
        u = 1.0 - w * w
        return (
            2.0
            * np.sqrt(2.0 * dc)
            * w
            * w
            / (u * np.sqrt((u - rc) * (u * u + u * rc + rc * rc + 2.0 * dc)))
        )

    zeros = np.zeros_like(half)
    a = batch_gauss(f_t, zeros, half, 96, cluster="sqrt")
    b = batch_gauss(f_w, zeros, half, 96)
    return 2.0 * (a + b)


def theta_of_r(sol: StrongSolution, r: float, half: str = "descending") -> float:
    """Signed angle of the curve where it crosses radius r on the given half."""
    if half not in ("descending", "ascending"):
        raise OutOfRange(f"half must be 'descending' or 'ascending', got {half!r}")
    if not (sol.r_c - 1e-12 <= r <= 1.0 + 1e-12):
        raise OutOfRange(f"radius {r} outside [r_c, 1] = [{sol.r_c}, 1]")
    r = min(max(r, sol.r_c), 1.0)
    swept = _theta_abs(sol.d, sol.r_c, r)
    if half == "ascending":
        swept = abs(sol.theta_f) - swept
    return sol.branch * swept


def _theta_abs(d, r_c, r):
    """Unsigned swept angle between radius r and the rim (descending side)."""
    m = 0.5 * (1.0 + r_c)
    half = math.sqrt(0.5 * (1.0 - r_c))
    if r >= m:
        return quad_tight(_theta_integrand_w(d, r_c), 0.0, math.sqrt(max(1.0 - r, 0.0)))
    w_part = quad_tight(_theta_integrand_w(d, r_c), 0.0, half)
    t_part = quad_tight(_theta_integrand_t(d, r_c), math.sqrt(max(r - r_c, 0.0)), half)
    return w_part + t_part


def _tau_abs(d, r_c, r):
    """Travel time between the rim and radius r along the descending half."""
    m = 0.5 * (1.0 + r_c)
    half = math.sqrt(0.5 * (1.0 - r_c))
    if r >= m:
        return quad_tight(_time_integrand_w(d, r_c), 0.0, math.sqrt(max(1.0 - r, 0.0)), tol=1e-11)
    w_part = quad_tight(_time_integrand_w(d, r_c), 0.0, half, tol=1e-11)
    t_part = quad_tight(_time_integrand_t(d, r_c), math.sqrt(max(r - r_c, 0.0)), half, tol=1e-11)
    return w_part + t_part


def theta_slope(sol: StrongSolution, r: float) -> float:
    """Signed d(theta)/dr on the descending half; diverges at r = r_c."""
    if not (sol.r_c < r <= 1.0):
        raise OutOfRange(f"radius {r} outside (r_c, 1]")
    val = math.sqrt(2.0 * sol.d * (1.0 - r) / ((r - sol.r_c) * _q(r, sol.d, sol.r_c))) / r
    # descending: theta moves toward theta_f as r drops, so dtheta/dr < 0 on branch +1
    return -sol.branch * val


def tof_strong(sol: StrongSolution) -> float:
    """Round-trip travel time rim -> r_c -> rim of the family member."""
    return 2.0 * _tau_abs(sol.d, sol.r_c, sol.r_c)


def shoot(theta_f: float) -> StrongSolution:
    """Family member hitting terminal angle theta_f, by bisection on log D.

    Stops when the swept angle matches |theta_f| within 1e-9.  Raises
    OutOfSector for |theta_f| outside (1e-9, 2*pi/3 - 1e-9).
    """
    target = abs(theta_f)
    if not (1e-9 < target < SECTOR_ANGLE - 1e-9):
        raise OutOfSector(
            f"terminal angle {theta_f} not strictly inside the reachable sector"
        )
    branch = 1 if theta_f >= 0.0 else -1
    lo, hi = 1e-9, 1e6
    while max_angle(lo) <= target:
        lo *= 1e-3
        if lo < 1e-280:
            raise OutOfSector(f"terminal angle {theta_f} too close to the sector edge")
    while max_angle(hi) >= target:
        hi *= 1e3
        if hi > 1e280:
            raise OutOfSector(f"terminal angle {theta_f} too close to zero")
    d = math.sqrt(lo * hi)
    for _ in range(300):
        swept = max_angle(d)
        if abs(swept - target) < 1e-9:
            break
        if swept > target:
            lo = d
        else:
            hi = d
        d = math.sqrt(lo * hi)
    else:
        raise OutOfRange("shooting failed to converge")
    return StrongSolution(d, critical_radius(d), branch, branch * max_angle(d))


def _shoot_batch(theta_fs):
    """Vectorized shooter for foliations: bisection on r_c, same family map."""
    targets = np.abs(np.asarray(theta_fs, dtype=float))
    if np.any(targets >= SECTOR_ANGLE) or np.any(targets <= 0.0):
        raise OutOfSector("batch shooter needs |theta_f| strictly inside (0, 2*pi/3)")
    lo = np.full(targets.shape, 1e-13)
    hi = np.full(targets.shape, 1.0 - 1e-13)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        swept = _max_angle_batch(mid**3 / (2.0 * (1.0 - mid)))
        high = swept > targets
        lo = np.where(high, mid, lo)
        hi = np.where(high, hi, mid)
    r_c = 0.5 * (lo + hi)
    return r_c**3 / (2.0 * (1.0 - r_c)), r_c


def _profile(d, r_c, radii):
    """Swept angle and elapsed time at each radius of the descending half.

    Returns (theta_abs, tau, half_theta, half_tau); the half_* values are
    the apex totals, so the ascending half follows by mirror symmetry.
    All radii must lie in [r_c, 1].
    """
    radii = np.clip(np.asarray(radii, dtype=float), r_c, 1.0)
    m = 0.5 * (1.0 + r_c)
    half = math.sqrt(0.5 * (1.0 - r_c))
    in_t = radii <= m
    t_targets = np.sqrt(np.maximum(radii[in_t] - r_c, 0.0))
    w_targets = np.sqrt(np.maximum(1.0 - radii[~in_t], 0.0))
    t_edges = np.union1d(panel_grid(0.0, half, 128, "sqrt"), np.clip(t_targets, 0.0, half))
    w_edges = np.union1d(panel_grid(0.0, half, 128), np.clip(w_targets, 0.0, half))

    th_t = cumulative_gauss(_theta_integrand_t(d, r_c), t_edges)
    th_w = cumulative_gauss(_theta_integrand_w(d, r_c), w_edges)
    tm_t = cumulative_gauss(_time_integrand_t(d, r_c), t_edges)
    tm_w = cumulative_gauss(_time_integrand_w(d, r_c), w_edges)

    it = np.searchsorted(t_edges, np.clip(t_targets, 0.0, half))
    iw = np.searchsorted(w_edges, np.clip(w_targets, 0.0, half))

    theta = np.empty(radii.shape)
    tau = np.empty(radii.shape)
    # r <= m: integral r..1 = (w piece total) + (t piece total - t cumulative)
    theta[in_t] = th_w[-1] + th_t[-1] - th_t[it]
    tau[in_t] = tm_w[-1] + tm_t[-1] - tm_t[it]
    # r > m: integral r..1 lives inside the w piece alone
    theta[~in_t] = th_w[iw]
    tau[~in_t] = tm_w[iw]
    half_theta = th_w[-1] + th_t[-1]
    half_tau = tm_w[-1] + tm_t[-1]
    return theta, tau, half_theta, half_tau


def sample_strong(sol: StrongSolution, n: int) -> SampledCurve:
    """Sample the family member at n parameters, radius affine on each half.

    s in [0, 1/2] descends from the rim to r_c, s in [1/2, 1] ascends back;
    the apex is a sample exactly when n is odd.  Endpoints are exact.
    """
    if n < 3:
        raise OutOfRange("sample_strong needs n >= 3")
    s = np.linspace(0.0, 1.0, n)
    desc = s <= 0.5
    r = np.where(
        desc,
        1.0 + 2.0 * (sol.r_c - 1.0) * s,
        1.0 - 2.0 * (1.0 - sol.r_c) * (1.0 - s),
    )
    r = np.clip(r, sol.r_c, 1.0)
    theta_abs, tau, half_theta, half_tau = _profile(sol.d, sol.r_c, r)
    theta = sol.branch * np.where(desc, theta_abs, 2.0 * half_theta - theta_abs)
    t_cum = np.where(desc, tau, 2.0 * half_tau - tau)
    t_cum[0] = 0.0
    theta[0] = 0.0
    theta[-1] = sol.theta_f
    params = {
        "family": "strong",
        "D": sol.d,
        "r_c": sol.r_c,
        "branch": sol.branch,
        "theta_f": sol.theta_f,
        "tof": 2.0 * half_tau,
    }
    return SampledCurve.from_polar(s, r, theta, t_cum, params)

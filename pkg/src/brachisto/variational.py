"""Constructive curve surgeries and numeric first variations.

monotonize and symmetrize realize the two classical reductions: any
admissible descent can be replaced by one with monotone sweep, and then by
one mirror-symmetric about half the terminal angle, without increasing the
travel time.  Both operate on the discrete polyline so their inequalities
hold for the sampled functional itself, not just in the limit.

The first-variation helpers differentiate the sampled time functional
numerically in a supplied perturbation direction.  A minimizer must show a
non-negative one-sided radial derivative (obstacle directions are one-sided)
and a vanishing angular derivative.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InadmissiblePerturbation, NoMidAngleCrossing, OutOfRange
from .geometry import SampledCurve, fill_times, tof_sampled


def monotonize(curve: SampledCurve) -> SampledCurve:
    """Clamp the sweep to its running supremum, capped at the terminal angle.

    The radial component is untouched, so each sample moves along its own
    circle toward the terminal ray; no segment gets longer and the travel
    time cannot increase.
    """
    r = curve.r
    th = curve.theta_unwrapped()
    th0 = th[0]
    w = th - th0
    sign = 1.0 if w[-1] >= 0.0 else -1.0
    w = sign * w
    clamped = np.minimum(np.maximum.accumulate(w), max(w[-1], 0.0))
    new_theta = th0 + sign * clamped
    # rebuild only the samples the clamp actually moved; untouched samples
    # keep their exact original coordinates so a no-op stays bit-identical
    xy = curve.xy.copy()
    moved = clamped != w
    xy[moved, 0] = r[moved] * np.cos(new_theta[moved])
    xy[moved, 1] = r[moved] * np.sin(new_theta[moved])
    return fill_times(SampledCurve(curve.s, xy, None, curve.params))


def _mirror_matrix(axis_angle: float) -> np.ndarray:
    c, s = math.cos(2.0 * axis_angle), math.sin(2.0 * axis_angle)
    return np.array([[c, s], [s, -c]])


def symmetrize(curve: SampledCurve):
    """Split at the half-angle ray and return the two mirrored completions.

    Each returned curve consists of one half of the input plus that half's
    reflection about theta_f/2, so the two travel times sum to exactly twice
    the input's (every input segment is integrated once directly and once
    reflected, and reflections preserve segment times).
    """
    th = curve.theta_unwrapped()
    theta_f = th[-1] - th[0]
    mid = th[0] + 0.5 * theta_f
    n = curve.n

    # first segment index whose far end reaches the mid angle
    reach = np.nonzero((th[1:] - mid) * (th[:-1] - mid) <= 0.0)[0]
    if reach.size == 0:
        raise NoMidAngleCrossing("curve never crosses the half-angle ray")
    i = int(reach[0])

    ray = np.array([math.cos(mid), math.sin(mid)])
    a, b = curve.xy[i], curve.xy[i + 1]
    d = b - a
    denom = ray[0] * d[1] - ray[1] * d[0]
    if abs(denom) < 1e-300:
        t = 0.0
    else:
        t = -(ray[0] * a[1] - ray[1] * a[0]) / denom
    t = min(max(t, 0.0), 1.0)
    cross_pt = a + t * d

    half1 = np.vstack([curve.xy[: i + 1], cross_pt])
    half2 = np.vstack([cross_pt, curve.xy[i + 1 :]])
    m = _mirror_matrix(mid)

    out1 = np.vstack([half1, (half1[:-1] @ m.T)[::-1]])
    out2 = np.vstack([(half2[1:] @ m.T)[::-1], half2])

    def rebuild(xy):
        s = np.linspace(0.0, 1.0, len(xy))
        return fill_times(SampledCurve(s, xy, None, curve.params))

    return rebuild(out1), rebuild(out2)


def _perturbed_time(curve, radii, thetas):
    trial = SampledCurve.from_polar(curve.s, radii, thetas, None, {})
    return tof_sampled(trial)


def first_variation_radial(
    curve: SampledCurve, q, eps_obstacle: float = 0.0, lam: float = 1e-5
) -> float:
    """One-sided derivative of the travel time toward radial profile q.

    The direction is q - r; q must agree with r at both endpoints and the
    perturbed curve must stay inside the annulus [eps_obstacle, 1] for the
    probe sizes used.  Richardson extrapolation in lam removes the leading
    finite-difference error.
    """
    q = np.asarray(q, dtype=float)
    r = curve.r
    if q.shape != r.shape:
        raise InadmissiblePerturbation("perturbation length mismatch")
    if abs(q[0] - r[0]) > 1e-12 or abs(q[-1] - r[-1]) > 1e-12:
        raise InadmissiblePerturbation("radial perturbation must fix the endpoints")
    direction = q - r
    trial = r + lam * direction
    if np.any(trial > 1.0 + 1e-12) or np.any(trial < eps_obstacle - 1e-12):
        raise InadmissiblePerturbation("perturbed radius leaves the admissible annulus")
    th = curve.theta_unwrapped()
    t0 = _perturbed_time(curve, r, th)
    t_half = _perturbed_time(curve, np.clip(r + 0.5 * lam * direction, 0.0, 1.0), th)
    t_full = _perturbed_time(curve, np.clip(trial, 0.0, 1.0), th)
    d_half = (t_half - t0) / (0.5 * lam)
    d_full = (t_full - t0) / lam
    return float(2.0 * d_half - d_full)


def first_variation_angular(curve: SampledCurve, xi, lam: float = 1e-5) -> float:
    """Derivative of the travel time in the angular direction xi."""
    xi = np.asarray(xi, dtype=float)
    r = curve.r
    th = curve.theta_unwrapped()
    if xi.shape != th.shape:
        raise InadmissiblePerturbation("perturbation length mismatch")
    if abs(xi[0]) > 1e-12 or abs(xi[-1]) > 1e-12:
        raise InadmissiblePerturbation("angular perturbation must vanish at endpoints")
    t0 = _perturbed_time(curve, r, th)
    d_half = (_perturbed_time(curve, r, th + 0.5 * lam * xi) - t0) / (0.5 * lam)
    d_full = (_perturbed_time(curve, r, th + lam * xi) - t0) / lam
    return float(2.0 * d_half - d_full)


def random_descent(
    rng, n: int = 257, theta_f: float | None = None, return_to_rim: bool = False
) -> SampledCurve:
    """Seeded wiggly admissible test curve.

    Default shape walks the radius monotonically down from 1 with a rough
    sweep; return_to_rim produces a rim-to-rim dip instead (what the
    mirroring construction wants for its terminal-radius-1 precondition).
    """
    if n < 5:
        raise OutOfRange("need at least 5 samples")
    s = np.linspace(0.0, 1.0, n)
    if theta_f is None:
        theta_f = rng.uniform(0.2, 2.0)
    if return_to_rim:
        depth = rng.uniform(0.2, 0.8)
        r = 1.0 - depth * np.sin(np.pi * s) ** rng.uniform(1.0, 2.5)
    else:
        drops = rng.uniform(0.0, 1.0, n - 1)
        r = 1.0 - 0.7 * np.concatenate([[0.0], np.cumsum(drops) / drops.sum()])
    th = theta_f * s + 0.35 * np.sin(rng.uniform(2.0, 9.0) * np.pi * s) * rng.uniform(
        -1.0, 1.0
    ) * np.sin(np.pi * s)
    return fill_times(SampledCurve.from_polar(s, r, th, None, {}))

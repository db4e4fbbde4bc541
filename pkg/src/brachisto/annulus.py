"""Obstacle-constrained descents on the annulus epsilon <= r <= 1.

Terminal points on the upper half-annulus boundary fall into four regimes.
Targets on the rim split by whether the free smooth member already clears
the obstacle (theta_f/2 against the tangency contact angle theta_c); past
that, minimizer candidates enter along the tangent member, ride the
obstacle circle, and exit along a mirrored or tangentially departing arc.
Targets on the obstacle either ride to their angle or are hit directly by
a steeper member whose first contact lands on them.

The circular-arc legs have speed sqrt(1/eps - 1) everywhere, so their time
is the closed form eps^(3/2) * span / sqrt(1 - eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import strong
from .errors import NegativeSpan, NotOnBoundary, OutOfRange
from .geometry import PolarPoint, SampledCurve, radial_time, reflected
from .strong import StrongSolution, d_from_rc, theta_of_r
from .weak import WeakSolution, sample_weak, tof_weak

RADIAL_R1 = "RadialR1"
SMOOTH_INTERIOR = "SmoothInterior"
TANGENT_ARC = "TangentArc"
TANGENT_EXIT_R3 = "TangentExitR3"
OBSTACLE_TERMINAL_R4 = "ObstacleTerminalR4"
REGIMES = (RADIAL_R1, SMOOTH_INTERIOR, TANGENT_ARC, TANGENT_EXIT_R3, OBSTACLE_TERMINAL_R4)

_BOUNDARY_TOL = 1e-9


def tangent_params(epsilon: float) -> tuple[float, float]:
    """(D, contact angle) of the member whose apex touches r = epsilon."""
    if not (0.0 < epsilon < 1.0):
        raise OutOfRange(f"inner radius {epsilon} outside (0, 1)")
    d_eps = d_from_rc(epsilon)
    sol = StrongSolution.from_d(d_eps)
    return d_eps, theta_of_r(sol, epsilon)


def arc_time(epsilon: float, dtheta: float) -> float:
    """Time to ride the obstacle circle through angle dtheta."""
    if dtheta < 0.0:
        raise NegativeSpan(f"arc span {dtheta} is negative")
    if not (0.0 < epsilon < 1.0):
        raise OutOfRange(f"inner radius {epsilon} outside (0, 1)")
    return epsilon**1.5 * dtheta / math.sqrt(1.0 - epsilon)


def classify_terminal(epsilon: float, terminal: PolarPoint) -> str:
    """Regime of a boundary terminal point of the upper half-annulus."""
    if not (0.0 < epsilon < 1.0):
        raise OutOfRange(f"inner radius {epsilon} outside (0, 1)")
    r, th = terminal.r, abs(terminal.theta)
    if r < epsilon - _BOUNDARY_TOL or r > 1.0 + _BOUNDARY_TOL:
        raise NotOnBoundary(f"terminal radius {r} outside the annulus [{epsilon}, 1]")
    if th <= _BOUNDARY_TOL:
        return RADIAL_R1
    if abs(th - math.pi) <= _BOUNDARY_TOL:
        return TANGENT_EXIT_R3
    if r >= 1.0 - _BOUNDARY_TOL:
        _, theta_c = tangent_params(epsilon)
        return SMOOTH_INTERIOR if 0.5 * th <= theta_c else TANGENT_ARC
    if abs(r - epsilon) <= _BOUNDARY_TOL:
        return OBSTACLE_TERMINAL_R4
    raise NotOnBoundary(f"terminal ({r}, {terminal.theta}) is interior to the annulus")


@dataclass(frozen=True)
class AnnulusSolution:
    """Constructed minimizer candidate for one boundary terminal."""

    epsilon: float
    terminal: PolarPoint
    regime: str
    entry: StrongSolution | None
    arc_span: tuple[float, float] | None
    exit: StrongSolution | None
    curve: SampledCurve

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise OutOfRange(f"unknown regime {self.regime!r}")
        if np.any(self.curve.r < self.epsilon - 1e-9):
            raise OutOfRange("curve dips inside the obstacle")
        if self.regime == TANGENT_ARC and abs(self.entry.r_c - self.epsilon) > 1e-8:
            raise OutOfRange("tangent-arc entry is not tangent to the obstacle")
        if self.arc_span is not None and self.arc_span[1] < self.arc_span[0] - 1e-12:
            raise NegativeSpan("obstacle arc runs backwards")

    @property
    def tof(self) -> float:
        return float(self.curve.params["tof"])


def _entry_samples(d, r_c, r_hi, r_lo, m):
    """Descending member piece from r_hi down to r_lo at m radii.

    Returns (r, sweep, time) with sweep/time measured from the rim, so
    callers starting at r_hi = 1 can use them directly.
    """
    r = np.linspace(r_hi, r_lo, m)
    sweep, tau, _, _ = strong._profile(d, r_c, r)
    return r, sweep, tau


def _bisect_partial_descent(epsilon, theta_t):
    """D of the member whose first crossing of r = epsilon sweeps theta_t."""
    lo, hi = 1e-14, epsilon  # bisection on the apex radius
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        d = mid**3 / (2.0 * (1.0 - mid))
        if strong._theta_abs(d, mid, epsilon) > theta_t:
            hi = mid
        else:
            lo = mid
    r_c = 0.5 * (lo + hi)
    return d_from_rc(r_c), r_c


def solve_constrained(epsilon: float, terminal: PolarPoint, n: int = 1201) -> AnnulusSolution:
    """Minimizer candidate reaching a boundary terminal of the half-annulus."""
    if n < 7:
        raise OutOfRange("need at least 7 samples")
    regime = classify_terminal(epsilon, terminal)
    r_t, th_signed = terminal.r, terminal.theta
    th = abs(th_signed)
    mirror = th_signed < 0.0

    d_eps, theta_c = tangent_params(epsilon)
    sol_eps = StrongSolution.from_d(d_eps)
    tau_half = 0.5 * strong.tof_strong(sol_eps)

    entry = None
    exit_sol = None
    span = None

    if regime == RADIAL_R1:
        s = np.linspace(0.0, 1.0, n)
        r = 1.0 + (r_t - 1.0) * s
        t_cum = math.pi / 2.0 - radial_time(r)
        t_cum[0] = 0.0
        curve = SampledCurve.from_polar(
            s, r, np.zeros(n), t_cum,
            {"family": "annulus", "regime": regime, "epsilon": epsilon,
             "theta_f": 0.0, "tof": float(t_cum[-1])},
        )

    elif regime == SMOOTH_INTERIOR:
        entry = strong.shoot(th)
        if entry.r_c < epsilon - 1e-9:
            raise OutOfRange("smooth member dips inside the obstacle")
        curve = strong.sample_strong(entry, n)
        curve = curve.with_params(family="annulus", regime=regime, epsilon=epsilon)

    elif regime == TANGENT_ARC:
        entry = sol_eps
        exit_sol = sol_eps
        theta_exit = th - theta_c
        span = (theta_c, theta_exit)
        m = max(n // 3, 3)
        arc_total = arc_time(epsilon, theta_exit - theta_c)
        total = 2.0 * tau_half + arc_total

        r1, sweep1, tau1 = _entry_samples(d_eps, epsilon, 1.0, epsilon, m)
        th_arc = np.linspace(theta_c, theta_exit, m)
        r3 = np.linspace(epsilon, 1.0, m)
        sweep3, tau3, _, _ = strong._profile(d_eps, epsilon, r3)

        s = np.concatenate([
            np.linspace(0.0, 1.0 / 3.0, m),
            np.linspace(1.0 / 3.0, 2.0 / 3.0, m)[1:],
            np.linspace(2.0 / 3.0, 1.0, m)[1:],
        ])
        r = np.concatenate([r1, np.full(m - 1, epsilon), r3[1:]])
        theta = np.concatenate([sweep1, th_arc[1:], th - sweep3[1:]])
        t_cum = np.concatenate([
            tau1,
            tau_half + epsilon**1.5 / math.sqrt(1.0 - epsilon) * (th_arc[1:] - theta_c),
            total - tau3[1:],
        ])
        theta[0], t_cum[0] = 0.0, 0.0
        theta[-1], t_cum[-1] = th, total
        curve = SampledCurve.from_polar(
            s, r, theta, np.maximum.accumulate(t_cum),
            {"family": "annulus", "regime": regime, "epsilon": epsilon,
             "D": d_eps, "theta_f": th, "tof": total},
        )

    elif regime == TANGENT_EXIT_R3:
        entry = sol_eps
        exit_sol = sol_eps
        sweep_exit = theta_c - strong._theta_abs(d_eps, epsilon, max(r_t, epsilon))
        phi_c = math.pi - sweep_exit
        span = (theta_c, phi_c)
        arc_total = arc_time(epsilon, phi_c - theta_c)
        m = max(n // 3, 3)

        r1, sweep1, tau1 = _entry_samples(d_eps, epsilon, 1.0, epsilon, m)
        th_arc = np.linspace(theta_c, phi_c, m)
        r3 = np.linspace(epsilon, max(r_t, epsilon), m)
        sweep3, tau3, _, _ = strong._profile(d_eps, epsilon, r3)
        total = 2.0 * tau_half + arc_total - tau3[-1]

        s = np.concatenate([
            np.linspace(0.0, 1.0 / 3.0, m),
            np.linspace(1.0 / 3.0, 2.0 / 3.0, m)[1:],
            np.linspace(2.0 / 3.0, 1.0, m)[1:],
        ])
        r = np.concatenate([r1, np.full(m - 1, epsilon), r3[1:]])
        theta = np.concatenate([
            sweep1,
            th_arc[1:],
            phi_c + (theta_c - sweep3[1:]),
        ])
        t_cum = np.concatenate([
            tau1,
            tau_half + epsilon**1.5 / math.sqrt(1.0 - epsilon) * (th_arc[1:] - theta_c),
            tau_half + arc_total + (tau_half - tau3[1:]),
        ])
        theta[0], t_cum[0] = 0.0, 0.0
        theta[-1], t_cum[-1] = math.pi, total
        curve = SampledCurve.from_polar(
            s, r, theta, np.maximum.accumulate(t_cum),
            {"family": "annulus", "regime": regime, "epsilon": epsilon,
             "D": d_eps, "theta_f": math.pi, "tof": total},
        )

    else:  # OBSTACLE_TERMINAL_R4
        if th >= theta_c:
            entry = sol_eps
            span = (theta_c, th)
            arc_total = arc_time(epsilon, th - theta_c)
            total = tau_half + arc_total
            # same entry grid as the three-piece regimes so trunk-sharing
            # curves sample the shared arc at identical points
            m = max(n // 3, 3)
            r1, sweep1, tau1 = _entry_samples(d_eps, epsilon, 1.0, epsilon, m)
            th_arc = np.linspace(theta_c, th, m)
            s = np.concatenate([np.linspace(0.0, 0.5, m), np.linspace(0.5, 1.0, m)[1:]])
            r = np.concatenate([r1, np.full(m - 1, epsilon)])
            theta = np.concatenate([sweep1, th_arc[1:]])
            t_cum = np.concatenate([
                tau1,
                tau_half + epsilon**1.5 / math.sqrt(1.0 - epsilon) * (th_arc[1:] - theta_c),
            ])
        else:
            d_b, r_c_b = _bisect_partial_descent(epsilon, th)
            entry = StrongSolution(d_b, r_c_b, 1, strong.max_angle(d_b))
            r = np.linspace(1.0, epsilon, n)
            theta, t_cum, _, _ = strong._profile(d_b, r_c_b, r)
            s = np.linspace(0.0, 1.0, n)
            total = float(t_cum[-1])
        theta[0], t_cum[0] = 0.0, 0.0
        theta[-1] = th
        total = float(t_cum[-1])
        curve = SampledCurve.from_polar(
            s, r, theta, np.maximum.accumulate(t_cum),
            {"family": "annulus", "regime": regime, "epsilon": epsilon,
             "D": entry.d, "theta_f": th, "tof": total},
        )

    if mirror:
        curve = reflected(curve)
        p = dict(curve.params)
        p["theta_f"] = -p.get("theta_f", th)
        curve = SampledCurve(curve.s, curve.xy, curve.t_cum, p)

    return AnnulusSolution(epsilon, terminal, regime, entry, span, exit_sol, curve)


def family_member(epsilon: float, d: float, theta_f: float, n: int = 1201) -> SampledCurve:
    """Obstacle-family curve with prescribed member parameter d.

    Descends along the d member to its first crossing of r = epsilon,
    rides the obstacle, and exits by the mirrored entry so the whole curve
    is symmetric about theta_f / 2.  A member whose critical radius clears
    the obstacle never touches it and is returned whole; its terminal
    angle is then the member's own maximal sweep, not theta_f.  Only the
    tangent member (d matching tangent_params) is a minimizer candidate.
    """
    if not (0.0 < epsilon < 1.0):
        raise OutOfRange(f"inner radius {epsilon} outside (0, 1)")
    if not abs(theta_f) < 2.0 * math.pi:
        raise OutOfRange(f"terminal angle {theta_f} out of range")
    if n < 7:
        raise OutOfRange("need at least 7 samples")
    sol = StrongSolution.from_d(d)
    th = abs(theta_f)
    # r_c == epsilon is the tangent member: it touches and rides
    if sol.r_c > epsilon + 1e-12:
        branch = -1 if theta_f < 0.0 else 1
        full = StrongSolution(d, sol.r_c, branch, branch * strong.max_angle(d))
        curve = strong.sample_strong(full, n)
        return curve.with_params(
            family="annulus", regime="prescribed", epsilon=epsilon,
            D=d, contact_sweep=None)

    sweep_c = float(strong._theta_abs(d, sol.r_c, epsilon))
    if th < 2.0 * sweep_c - 1e-12:
        raise NegativeSpan(
            f"ride span would be negative: terminal sweep {th} < twice "
            f"the contact sweep {sweep_c}")
    m = max(n // 3, 3)
    r1, sweep1, tau1 = _entry_samples(d, sol.r_c, 1.0, epsilon, m)
    tau_c = float(tau1[-1])
    th_arc = np.linspace(sweep_c, th - sweep_c, m)
    arc_total = arc_time(epsilon, th - 2.0 * sweep_c)
    total = 2.0 * tau_c + arc_total
    r3 = np.linspace(epsilon, 1.0, m)
    sweep3, tau3, _, _ = strong._profile(d, sol.r_c, r3)
    s = np.concatenate([
        np.linspace(0.0, 1.0 / 3.0, m),
        np.linspace(1.0 / 3.0, 2.0 / 3.0, m)[1:],
        np.linspace(2.0 / 3.0, 1.0, m)[1:],
    ])
    r = np.concatenate([r1, np.full(m - 1, epsilon), r3[1:]])
    theta = np.concatenate([sweep1, th_arc[1:], th - sweep3[1:]])
    t_cum = np.concatenate([
        tau1,
        tau_c + epsilon**1.5 / math.sqrt(1.0 - epsilon) * (th_arc[1:] - sweep_c),
        total - tau3[1:],
    ])
    theta[0], t_cum[0] = 0.0, 0.0
    theta[-1], t_cum[-1] = th, total
    curve = SampledCurve.from_polar(
        s, r, theta, np.maximum.accumulate(t_cum),
        {"family": "annulus", "regime": "prescribed", "epsilon": epsilon,
         "D": d, "theta_f": th, "tof": total, "contact_sweep": sweep_c},
    )
    if theta_f < 0.0:
        curve = reflected(curve)
        p = dict(curve.params)
        p["theta_f"] = -th
        curve = SampledCurve(curve.s, curve.xy, curve.t_cum, p)
    return curve


def foliate_annulus(epsilon: float, n_per_region: int, n_samples: int = 601):
    """Evenly spaced boundary terminals on R2, R3, R4; upper half only."""
    if n_per_region < 1:
        raise OutOfRange("need at least one curve per region")
    out = []
    for k in range(n_per_region):
        th = (k + 0.5) * math.pi / n_per_region
        out.append(solve_constrained(epsilon, PolarPoint(1.0, th), n_samples))
    for k in range(n_per_region):
        r_t = epsilon + (k + 0.5) * (1.0 - epsilon) / n_per_region
        out.append(solve_constrained(epsilon, PolarPoint(r_t, math.pi), n_samples))
    for k in range(n_per_region):
        th = (k + 0.5) * math.pi / n_per_region
        out.append(solve_constrained(epsilon, PolarPoint(epsilon, th), n_samples))
    return out


def limit_curve(theta_f: float, n: int = 2001) -> SampledCurve:
    """Unconstrained minimizer for a rim terminal: smooth inside the
    reachable sector, through-origin outside it."""
    if abs(theta_f) < 2.0 * math.pi / 3.0:
        if abs(theta_f) < 1e-12:
            s = np.linspace(0.0, 1.0, n)
            r = np.concatenate([np.linspace(1.0, 0.0, (n + 1) // 2), np.linspace(0.0, 1.0, n - (n + 1) // 2 + 1)[1:]])
            return SampledCurve.from_polar(s, np.abs(r), np.zeros(n), None, {"family": "radial"})
        return strong.sample_strong(strong.shoot(theta_f), n)
    w = WeakSolution(theta_f, 1.0)
    return sample_weak(w, n if n % 2 == 1 else n + 1)


def convergence_study(theta_f: float, eps_list, n: int = 2001):
    """Distances from constrained rim solutions to the unconstrained limit."""
    if not (0.0 < theta_f < math.pi):
        raise OutOfRange(f"terminal angle {theta_f} outside (0, pi)")
    eps_list = [float(e) for e in eps_list]
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise OutOfRange("inner radii must be strictly decreasing")
    from .geometry import curve_distance

    limit = limit_curve(theta_f, n)
    rows = []
    for eps in eps_list:
        sol = solve_constrained(eps, PolarPoint(1.0, theta_f), n)
        rows.append((float(eps), float(curve_distance(sol.curve, limit))))
    return rows

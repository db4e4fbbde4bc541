"""Quadrature helpers: adaptive wrappers and vectorized composite panels.

The solver integrands are made smooth first by analytic endpoint
substitutions; these helpers then integrate the smooth remainders either
adaptively (scipy QUADPACK, for single high-accuracy values) or on fixed
composite Gauss-Legendre panels (for whole sample grids at once).
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

_GL7_NODES, _GL7_WTS = np.polynomial.legendre.leggauss(7)
_GL10_NODES, _GL10_WTS = np.polynomial.legendre.leggauss(10)


def quad_tight(fun, a: float, b: float, tol: float = 1e-12) -> float:
    """Adaptive Gauss-Kronrod integral of a smooth scalar integrand."""
    if b <= a:
        return 0.0
    val, _ = quad(fun, a, b, epsabs=tol, epsrel=tol, limit=200)
    return val


def cumulative_gauss(fun, edges) -> np.ndarray:
    """Cumulative integral of a vectorized integrand at the given edge grid.

    Returns F with F[0] = 0 and F[k] = integral from edges[0] to edges[k],
    one 7-point Gauss-Legendre panel per consecutive edge pair.  Edges must
    be non-decreasing; zero-width panels contribute zero.
    """
    edges = np.asarray(edges, dtype=float)
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = mid[:, None] + half[:, None] * _GL7_NODES[None, :]
    vals = fun(pts.reshape(-1)).reshape(pts.shape)
    panels = half * (vals @ _GL7_WTS)
    out = np.empty(edges.size)
    out[0] = 0.0
    np.cumsum(panels, out=out[1:])
    return out


def panel_grid(lo: float, hi: float, n: int, cluster: str = "none") -> np.ndarray:
    """Panel edges on [lo, hi]; 'sqrt' clusters quadratically toward lo."""
    u = np.linspace(0.0, 1.0, n + 1)
    if cluster == "sqrt":
        u = u * u
    return lo + (hi - lo) * u


def batch_gauss(fun, lo, hi, n_panels: int, cluster: str = "none") -> np.ndarray:
    """Integrals of fun over [lo_i, hi_i] for arrays of bounds, all at once.

    fun(x) must broadcast where x has shape (m, n_panels * order); used for
    families of integrands indexed by the row (the closure carries the row
    parameters and must index them with [:, None]).
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    u = np.linspace(0.0, 1.0, n_panels + 1)
    if cluster == "sqrt":
        u = u * u
    edges = lo[:, None] + (hi - lo)[:, None] * u[None, :]
    a = edges[:, :-1]
    b = edges[:, 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = mid[:, :, None] + half[:, :, None] * _GL7_NODES[None, None, :]
    m = lo.size
    vals = fun(pts.reshape(m, -1)).reshape(pts.shape)
    return np.einsum("ijk,k,ij->i", vals, _GL7_WTS, half)


def gauss10(fun, a: float, b: float) -> float:
    """Single 10-point Gauss-Legendre panel (scalar bounds, vectorized fun)."""
    half = 0.5 * (b - a)
    pts = 0.5 * (a + b) + half * _GL10_NODES
    return float(half * np.dot(fun(pts), _GL10_WTS))

"""FastAPI application exposing the solver operations.

Endpoints mirror the CLI subcommands one to one.  Library errors map to
HTTP 422 with the exception type in the detail string; everything else is
a plain JSON body defined in schemas.py.
"""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, figures
from ..annulus import convergence_study, foliate_annulus, solve_constrained
from ..errors import BrachistoError, GridTooCoarse
from ..field import FAMILIES, eikonal_residual, value_grid
from ..geometry import PolarPoint, curve_to_json_dict, radial_time
from ..oracle import KNIGHT16, GridGraph, coprime_stencil, oracle_min_time
from ..strong import sample_strong, shoot, tof_strong
from ..variational import first_variation_angular, first_variation_radial
from ..weak import WeakSolution, sample_weak, tof_weak
from . import schemas

_SECTOR = 2.0 * math.pi / 3.0
_STENCILS = {"knight": KNIGHT16, "dense": coprime_stencil(12, 2)}


def _clean(value):
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value


def _odd(n: int) -> int:
    return n if n % 2 == 1 else n + 1


def _solve_curve(theta_f: float, epsilon: float, terminal_r: float | None, n: int):
    """Family selection shared by /solve and the stationarity check."""
    r_f = 1.0 if terminal_r is None else terminal_r
    if epsilon > 0.0:
        sol = solve_constrained(epsilon, PolarPoint(r_f, theta_f), n)
        return "constrained", sol.curve
    if abs(theta_f) < _SECTOR and r_f >= 1.0 - 1e-12:
        return "strong", sample_strong(shoot(theta_f), n)
    # Interior disk terminals and wide angles use the through-origin family.
    return "weak", sample_weak(WeakSolution(theta_f, r_f), _odd(n))


def _analytic_time(epsilon: float, r: float, theta: float) -> float | None:
    """Closed-form minimal time when the target admits one, else None."""
    a = abs(math.remainder(theta, 2.0 * math.pi))
    try:
        if epsilon == 0.0:
            if r >= 1.0 - 1e-9:
                if a < _SECTOR:
                    return tof_strong(shoot(a))
                return tof_weak(WeakSolution(a, 1.0))
            if a <= 1e-12:
                return 0.5 * math.pi - float(radial_time(r))
            return None
        return solve_constrained(epsilon, PolarPoint(r, a), 601).tof
    except BrachistoError:
        return None


def _curve_payload(curve) -> dict:
    return _clean(curve_to_json_dict(curve))


def create_app() -> FastAPI:
    app = FastAPI(title="brachisto", version=__version__)

    @app.exception_handler(BrachistoError)
    async def _domain_error(request: Request, exc: BrachistoError):
        return JSONResponse(
            status_code=422,
            content={"detail": f"{type(exc).__name__}: {exc}"},
        )

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/solve", response_model=schemas.SolveResponse)
    async def solve(req: schemas.SolveRequest):
        family, curve = _solve_curve(req.theta_f, req.epsilon, req.terminal_r, req.n)
        record = _curve_payload(curve)
        return {
            "family": family,
            "tof": record["params"]["tof"],
            "params": record["params"],
            "curve": record,
        }

    @app.post("/foliate", response_model=schemas.FoliateResponse)
    async def foliate(req: schemas.FoliateRequest):
        index, curves = [], []
        if req.epsilon == 0.0:
            for k in range(req.count):
                theta_f = -math.pi + (k + 0.5) * 2.0 * math.pi / req.count
                label = f"curve_{k:03d}"
                if abs(theta_f) < _SECTOR:
                    sol = shoot(theta_f)
                    c = sample_strong(sol, req.n_samples)
                    index.append({
                        "label": label, "family": "strong", "theta_f": theta_f,
                        "tof": float(c.params["tof"]), "D": sol.d, "r_c": sol.r_c,
                    })
                else:
                    w = WeakSolution(theta_f, 1.0)
                    c = sample_weak(w, _odd(req.n_samples))
                    index.append({
                        "label": label, "family": "weak", "theta_f": theta_f,
                        "tof": tof_weak(w),
                    })
                curves.append(_curve_payload(c))
        else:
            sols = foliate_annulus(req.epsilon, req.count, req.n_samples)
            for k, sol in enumerate(sols):
                region = ("rim", "seam", "ring")[k // req.count]
                entry = {
                    "label": f"{region}_{k % req.count:03d}",
                    "family": "constrained",
                    "theta_f": sol.terminal.theta,
                    "tof": sol.tof,
                    "regime": sol.regime,
                }
                if sol.entry is not None:
                    entry["D"] = sol.entry.d
                    entry["r_c"] = sol.entry.r_c
                index.append(entry)
                curves.append(_curve_payload(sol.curve))
        return {"index": index, "curves": curves}

    @app.post("/value", response_model=schemas.ValueResponse)
    async def value(req: schemas.ValueRequest):
        grid = value_grid(req.epsilon, req.n_r, req.n_theta, req.n_curves,
                          n_samples=req.n_samples)
        try:
            max_residual = eikonal_residual(grid)[0]
        except GridTooCoarse:
            max_residual = None
        return {
            "epsilon": grid.epsilon,
            "n_r": grid.n_r,
            "n_theta": grid.n_theta,
            "families": FAMILIES,
            "values": grid.values.tolist(),
            "source_mask": grid.source_mask.tolist(),
            "filled_fraction": float(np.mean(grid.filled)),
            "max_residual": max_residual,
        }

    @app.post("/oracle", response_model=schemas.OracleResponse)
    async def oracle(req: schemas.OracleRequest):
        g = GridGraph(req.n_r, req.n_theta, req.epsilon, _STENCILS[req.stencil])
        t = oracle_min_time(g, PolarPoint(req.target_r, req.target_theta))
        analytic = _analytic_time(req.epsilon, req.target_r, req.target_theta)
        gap = None
        if analytic is not None and analytic > 0.0:
            gap = t / analytic - 1.0
        return {
            "time": t,
            "analytic": analytic,
            "gap_vs_analytic": gap,
            "resolution": (req.n_r, req.n_theta),
        }

    @app.post("/converge", response_model=schemas.ConvergeResponse)
    async def converge(req: schemas.ConvergeRequest):
        return {"rows": convergence_study(req.theta_f, req.eps_list, req.n)}

    @app.post("/check/stationarity", response_model=schemas.StationarityResponse)
    async def check_stationarity(req: schemas.StationarityRequest):
        family, curve = _solve_curve(req.theta_f, req.epsilon, req.terminal_r, req.n)
        rng = np.random.default_rng(req.seed)
        s = curve.s
        radial, angular = [], []
        for _ in range(req.n_checks):
            m1, m2 = rng.integers(1, 4, size=2)
            w1, w2 = rng.uniform(-1.0, 1.0, size=2)
            amp = rng.uniform(0.05, 0.25)
            bump = w1 * np.sin(m1 * np.pi * s) + w2 * np.sin(m2 * np.pi * s)
            q = np.clip(curve.r + amp * bump, req.epsilon, 1.0)
            q[0], q[-1] = curve.r[0], curve.r[-1]
            radial.append(first_variation_radial(curve, q, eps_obstacle=req.epsilon))
            xi = amp * np.sin(m2 * np.pi * s)
            angular.append(first_variation_angular(curve, xi))
        radial_min = float(min(radial))
        angular_max = float(max(abs(a) for a in angular))
        return {
            "family": family,
            "radial_min": radial_min,
            "angular_max_abs": angular_max,
            "n_checks": req.n_checks,
            "tol": req.tol,
            "passed": radial_min >= -req.tol and angular_max <= req.tol,
        }

    @app.post("/check/eikonal", response_model=schemas.EikonalResponse)
    async def check_eikonal(req: schemas.EikonalRequest):
        grid = value_grid(req.epsilon, req.n_r, req.n_theta, req.n_curves,
                          n_samples=req.n_samples)
        max_residual, field = eikonal_residual(grid)
        return {
            "max_residual": max_residual,
            "included": int(np.sum(~np.isnan(field))),
            "tol": req.tol,
            "passed": max_residual < req.tol,
        }

    @app.post("/repro/{name}")
    async def repro(name: str):
        """Figure bundle as plain JSON; the client renders files from it."""
        return _clean(figures.build(name))

    return app


app = create_app()

"""Request and response bodies for the service endpoints."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class CurveRecord(BaseModel):
    """Sampled curve; rows of samples are [s, x, y, r, theta, t_cum]."""

    params: dict[str, Any]
    samples: list[list[float]]


class SolveRequest(_Request):
    theta_f: float
    epsilon: float = Field(0.0, ge=0.0, lt=1.0)
    terminal_r: float | None = Field(None, gt=0.0, le=1.0)
    n: int = Field(1201, ge=7, le=100001)


class SolveResponse(BaseModel):
    family: str
    tof: float
    params: dict[str, Any]
    curve: CurveRecord


class FoliateRequest(_Request):
    epsilon: float = Field(0.0, ge=0.0, lt=1.0)
    # count is the total number of curves on the disk, or the number of
    # curves per boundary region (rim, seam, obstacle) on an annulus.
    count: int = Field(16, ge=1, le=2048)
    n_samples: int = Field(601, ge=7, le=100001)


class FoliateEntry(BaseModel):
    label: str
    family: str
    theta_f: float
    tof: float
    D: float | None = None
    r_c: float | None = None
    regime: str | None = None


class FoliateResponse(BaseModel):
    index: list[FoliateEntry]
    curves: list[CurveRecord]


class ValueRequest(_Request):
    epsilon: float = Field(0.0, ge=0.0, lt=1.0)
    n_r: int = Field(200, ge=16, le=1024)
    n_theta: int = Field(400, ge=16, le=2048)
    n_curves: int = Field(512, ge=64, le=4096)
    n_samples: int = Field(1201, ge=101, le=20001)


class ValueResponse(BaseModel):
    epsilon: float
    n_r: int
    n_theta: int
    families: tuple[str, ...]
    values: list[list[float]]
    source_mask: list[list[int]]
    filled_fraction: float
    # None when the grid is too coarse for the residual exclusion bands.
    max_residual: float | None


class OracleRequest(_Request):
    target_r: float = Field(..., ge=0.0, le=1.0)
    target_theta: float
    epsilon: float = Field(0.0, ge=0.0, lt=1.0)
    n_r: int = Field(200, ge=4, le=2048)
    n_theta: int = Field(400, ge=8, le=4096)
    stencil: Literal["knight", "dense"] = "knight"


class OracleResponse(BaseModel):
    time: float
    analytic: float | None
    gap_vs_analytic: float | None
    resolution: tuple[int, int]


class ConvergeRequest(_Request):
    theta_f: float
    eps_list: list[float] = Field(..., min_length=1)
    n: int = Field(2001, ge=101, le=100001)


class ConvergeResponse(BaseModel):
    rows: list[tuple[float, float]]


class StationarityRequest(_Request):
    theta_f: float
    epsilon: float = Field(0.5, ge=0.0, lt=1.0)
    terminal_r: float | None = Field(None, gt=0.0, le=1.0)
    n: int = Field(9601, ge=101, le=100001)
    n_checks: int = Field(12, ge=1, le=500)
    seed: int = 0
    tol: float = Field(1e-4, gt=0.0)


class StationarityResponse(BaseModel):
    family: str
    radial_min: float
    angular_max_abs: float
    n_checks: int
    tol: float
    passed: bool


class EikonalRequest(_Request):
    epsilon: float = Field(0.0, ge=0.0, lt=1.0)
    n_r: int = Field(200, ge=16, le=1024)
    n_theta: int = Field(400, ge=16, le=2048)
    n_curves: int = Field(512, ge=64, le=4096)
    n_samples: int = Field(1201, ge=101, le=20001)
    tol: float = Field(0.05, gt=0.0)


class EikonalResponse(BaseModel):
    max_residual: float
    included: int
    tol: float
    passed: bool

"""Request and response models of the sweep service.

Requests mirror the experiment configuration file format one to one: a
config file is simply the JSON dump of a request model, and CLI flags
override individual fields.  All quantities are SI except threshold grids,
which are dBm by schema (matching the CSV column).
"""

from __future__ import annotations

import math
from enum import Enum
from typing import Any, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from ..analysis import ChannelParams, CoverageSpec, Linear, NetworkParams, Nonlinear


class AntennaModel(str, Enum):
    gaussian = "gaussian"
    flattop = "flattop"
    ula = "ula"


class EngineKind(str, Enum):
    analytic = "analytic"
    mc = "mc"
    both = "both"


def _strictly_increasing(values: list[float], what: str) -> list[float]:
    if not values:
        raise ValueError(f"{what} grid must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{what} grid must be strictly increasing")
    return values


class ChannelSpec(BaseModel):
    alpha_l: float = 2.1
    alpha_n: float = 2.92
    c_l: float = 10.0 ** (-61.4 / 10.0)
    c_n: float = 10.0 ** (-72.0 / 10.0)
    m_l: int = 3
    m_n: int = 2
    beta: float = 0.0071

    @model_validator(mode="after")
    def _core_invariants(self):
        self.to_params()
        return self

    def to_params(self) -> ChannelParams:
        return ChannelParams(
            alpha_l=self.alpha_l,
            alpha_n=self.alpha_n,
            c_l=self.c_l,
            c_n=self.c_n,
            m_l=self.m_l,
            m_n=self.m_n,
            beta=self.beta,
        )


class NetworkSpec(BaseModel):
    lambda_t: float = Field(default=5e-4, ge=0.0)
    r0: float = Field(default=50.0, gt=0.0)
    pt_w: float = Field(default=10.0, gt=0.0)

    def to_params(self) -> NetworkParams:
        return NetworkParams(lambda_t=self.lambda_t, r0=self.r0, pt=self.pt_w)


class EhSpec(BaseModel):
    kind: Literal["nonlinear", "linear"] = "nonlinear"
    pm: float = Field(default=0.01, gt=0.0)
    pa: float = Field(default=1500.0, gt=0.0)
    pb: float = Field(default=0.0022, gt=0.0)
    zeta: float = Field(default=1.0, gt=0.0, le=1.0)

    def to_model(self):
        if self.kind == "linear":
            return Linear(zeta=self.zeta)
        return Nonlinear(pm=self.pm, pa=self.pa, pb=self.pb)


class SolverSpec(BaseModel):
    k_order: int = Field(default=5, ge=1)
    series_tol: float = Field(default=1e-10, gt=0.0)
    series_max_terms: int = Field(default=60, ge=1)
    quad_rtol: float = Field(default=1e-8, gt=0.0)
    quad_atol: float = Field(default=1e-10, gt=0.0)

    def to_spec(self) -> CoverageSpec:
        return CoverageSpec(
            k_order=self.k_order,
            series_tol=self.series_tol,
            series_max_terms=self.series_max_terms,
            quad_rtol=self.quad_rtol,
            quad_atol=self.quad_atol,
        )


class McSpec(BaseModel):
    trials: int = Field(default=20_000, ge=1000)
    seed: int = Field(default=20250809, ge=0)
    r_max: Optional[float] = Field(default=None, gt=0.0)
    block_size: int = Field(default=4096, ge=1)


class SweepCommon(BaseModel):
    scenario: str = "default"
    theta0: float = Field(default=math.pi / 12, gt=0.0, lt=math.pi)
    antennas: list[AntennaModel] = [AntennaModel.gaussian]
    ula_elements: Optional[int] = Field(default=None, ge=2)
    # element spacing over wavelength of the comparison array; recorded in
    # the provenance header but not consumed by the array-factor gain model
    kappa: float = Field(default=0.25, gt=0.0)
    engine: EngineKind = EngineKind.both
    network: NetworkSpec = NetworkSpec()
    channel: ChannelSpec = ChannelSpec()
    solver: SolverSpec = SolverSpec()
    mc: McSpec = McSpec()

    @field_validator("antennas")
    @classmethod
    def _nonempty(cls, v):
        if not v:
            raise ValueError("at least one antenna model is required")
        return v


class CoverageSweepRequest(SweepCommon):
    scenario: str = "coverage"
    threshold_dbm: list[float]
    sigmas: list[float] = [0.0]
    eh: EhSpec = EhSpec()

    @field_validator("threshold_dbm")
    @classmethod
    def _thr(cls, v):
        return _strictly_increasing(v, "threshold")

    @field_validator("sigmas")
    @classmethod
    def _sig(cls, v):
        if not v:
            raise ValueError("at least one misalignment spread is required")
        if any(s < 0 for s in v):
            raise ValueError("misalignment spreads must be non-negative")
        return v


class EnergySweepRequest(SweepCommon):
    scenario: str = "energy"
    axis: Literal["sigma", "lambda"] = "sigma"
    sigma_grid: Optional[list[float]] = None
    lambda_grid: Optional[list[float]] = None
    sigma: float = Field(default=0.0, ge=0.0)
    eh_variants: list[Literal["linear", "nonlinear"]] = ["linear"]
    eh: EhSpec = EhSpec()

    @model_validator(mode="after")
    def _grid(self):
        if self.axis == "sigma":
            if self.sigma_grid is None:
                raise ValueError("sigma axis requires sigma_grid")
            _strictly_increasing(self.sigma_grid, "sigma")
            if any(s < 0 for s in self.sigma_grid):
                raise ValueError("misalignment spreads must be non-negative")
        else:
            if self.lambda_grid is None:
                raise ValueError("lambda axis requires lambda_grid")
            _strictly_increasing(self.lambda_grid, "lambda")
            if any(l <= 0 for l in self.lambda_grid):
                raise ValueError("densities must be positive")
        if not self.eh_variants:
            raise ValueError("at least one harvester variant is required")
        return self


class RelSweepRequest(BaseModel):
    scenario: str = "rel"
    theta0s: list[float] = [math.pi / 24, math.pi / 12, math.pi / 6]
    sigma_grid: list[float]
    antennas: list[AntennaModel] = [AntennaModel.gaussian]
    engine: EngineKind = EngineKind.analytic
    network: NetworkSpec = NetworkSpec()
    channel: ChannelSpec = ChannelSpec()
    mc: McSpec = McSpec()

    @field_validator("sigma_grid")
    @classmethod
    def _sig(cls, v):
        _strictly_increasing(v, "sigma")
        if any(s < 0 for s in v):
            raise ValueError("misalignment spreads must be non-negative")
        return v

    @field_validator("theta0s", "antennas")
    @classmethod
    def _nonempty(cls, v):
        if not v:
            raise ValueError("grid must not be empty")
        return v


class PdfCheckRequest(BaseModel):
    scenario: str = "pdf-check"
    theta0: float = Field(default=math.pi / 12, gt=0.0, lt=math.pi)
    bae: Literal["gaussian", "uniform"] = "gaussian"
    sigmas: list[float] = []
    laws: list[Literal["single", "cascade-exact", "cascade-approx"]] = [
        "cascade-exact",
        "cascade-approx",
    ]
    points: int = Field(default=400, ge=16, le=100_000)

    @model_validator(mode="after")
    def _sigmas(self):
        if self.bae == "gaussian" and not self.sigmas:
            raise ValueError("gaussian error model requires at least one sigma")
        if any(s <= 0 for s in self.sigmas):
            raise ValueError("sigmas must be positive (use the uniform model otherwise)")
        if not self.laws:
            raise ValueError("at least one law is required")
        return self


# --------------------------------------------------------------------------
# responses


class CoverageRow(BaseModel):
    threshold_dbm: float
    engine: str
    antenna: str
    sigma: float
    p_ec: float
    ci: float


class EnergyRow(BaseModel):
    axis: str
    axis_value: float
    engine: str
    antenna: str
    eh_variant: str
    mean_energy_w: float
    ci: float
    rel: float


class RelRow(BaseModel):
    theta0: float
    sigma: float
    antenna: str
    engine: str
    rel_value: float
    ci: float


class PdfRow(BaseModel):
    law: str
    sigma: float
    kind: Literal["density", "atom"]
    omega: float
    value: float


class SelftestCheck(BaseModel):
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


class CoverageSweepResponse(BaseModel):
    meta: dict[str, Any]
    rows: list[CoverageRow]


class EnergySweepResponse(BaseModel):
    meta: dict[str, Any]
    rows: list[EnergyRow]


class RelSweepResponse(BaseModel):
    meta: dict[str, Any]
    rows: list[RelRow]


class PdfCheckResponse(BaseModel):
    meta: dict[str, Any]
    rows: list[PdfRow]


class SelftestResponse(BaseModel):
    meta: dict[str, Any]
    passed: bool
    checks: list[SelftestCheck]

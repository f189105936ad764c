"""FastAPI application exposing the sweep runners.

Long sweeps run synchronously within the request; clients drive them with
generous timeouts (the bundled CLI disables its timeout entirely).
"""

from __future__ import annotations

from fastapi import FastAPI

from .. import __version__, experiments
from .schemas import (
    CoverageSweepRequest,
    CoverageSweepResponse,
    EnergySweepRequest,
    EnergySweepResponse,
    PdfCheckRequest,
    PdfCheckResponse,
    RelSweepRequest,
    RelSweepResponse,
    SelftestResponse,
)

app = FastAPI(
    title="mmwpt sweep service",
    version=__version__,
    description=(
        "Energy-coverage and harvested-energy sweeps for a millimeter-wave "
        "wireless-power-transfer network under imperfect beam alignment."
    ),
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/sweeps/coverage", response_model=CoverageSweepResponse)
def coverage_sweep(req: CoverageSweepRequest) -> CoverageSweepResponse:
    meta, rows = experiments.run_coverage_sweep(req)
    return CoverageSweepResponse(meta=meta, rows=rows)


@app.post("/sweeps/energy", response_model=EnergySweepResponse)
def energy_sweep(req: EnergySweepRequest) -> EnergySweepResponse:
    meta, rows = experiments.run_energy_sweep(req)
    return EnergySweepResponse(meta=meta, rows=rows)


@app.post("/sweeps/rel", response_model=RelSweepResponse)
def rel_sweep(req: RelSweepRequest) -> RelSweepResponse:
    meta, rows = experiments.run_rel_sweep(req)
    return RelSweepResponse(meta=meta, rows=rows)


@app.post("/pdf-check", response_model=PdfCheckResponse)
def pdf_check(req: PdfCheckRequest) -> PdfCheckResponse:
    meta, rows = experiments.run_pdf_check(req)
    return PdfCheckResponse(meta=meta, rows=rows)


@app.post("/selftest", response_model=SelftestResponse)
def selftest() -> SelftestResponse:
    meta, passed, checks = experiments.run_selftest_report()
    return SelftestResponse(meta=meta, passed=passed, checks=checks)

"""
HTTP service wrapping the inversion library
===========================================

Every operation of the package is exposed as a POST endpoint taking a
pydantic request model and returning a JSON document that echoes the full
configuration (for reproducibility) alongside the results.  The CLI is a
thin client of this app; by default it mounts the app in process, so no
server needs to run for command-line use.  `phasepot-serve` starts a
network instance via uvicorn.
"""

from __future__ import annotations

import math
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .errors import PhasePotError
from .oneterm import (
    PhaseShiftSpec,
    branch_parameter,
    potential_table,
    potential_value,
    select_nonsingular,
)
from .verify import solve_phase_shift
from .wronskian import PairParams, find_roots, is_nonsingular_pair, theorem_sweep
from .zeros import ZeroQuery, bessel_zero, proposition_sweep

SCHEMA_VERSION = 1


class ErrorResponse(BaseModel):
    detail: str
    error_type: str


class BranchModel(BaseModel):
    l: float
    delta: float
    n: int
    L: float
    coupling: float
    degenerate: bool


class InvertRequest(BaseModel):
    l: float
    delta: float
    n: Optional[int] = Field(default=None, description="branch index; omit for the nonsingular branch")
    x_max: float = Field(default=30.0, gt=0.0)
    num_points: int = Field(default=600, ge=2, le=100_000)


class TableModel(BaseModel):
    x: list[float]
    q: list[float]
    singular_flag: list[bool]


class InvertResponse(BaseModel):
    schema_version: int
    version: str
    config: InvertRequest
    branch: BranchModel
    singular_points: list[float]
    exclusion_radii: list[float]
    table: TableModel


class ZerosRequest(BaseModel):
    kind: Literal["J", "Y", "Jprime"]
    nu: float = Field(gt=0.0)
    count: int = Field(ge=1, le=500)


class ZerosResponse(BaseModel):
    schema_version: int
    version: str
    config: ZerosRequest
    zeros: list[float]


class WronskianScanRequest(BaseModel):
    l: float
    L: float
    x_max: float = Field(default=100.0, gt=0.0)


class WronskianScanResponse(BaseModel):
    schema_version: int
    version: str
    config: WronskianScanRequest
    nonsingular_pair: bool
    sign_origin: int
    limit_infinity: float
    roots: list[float]
    root_brackets: list[tuple[float, float]]
    samples_x: list[float]
    samples_w: list[float]


class TheoremCheckRequest(BaseModel):
    grid_max: float = Field(default=5.0, gt=0.0)
    grid_step: float = Field(default=0.25, gt=0.0)
    x_max: float = Field(default=100.0, gt=0.0)


class TheoremRecordModel(BaseModel):
    l: float
    L: float
    n_roots: int
    sign_origin: int
    limit_infinity: float
    expected: str
    verdict: str


class TheoremCheckResponse(BaseModel):
    schema_version: int
    version: str
    config: TheoremCheckRequest
    records: list[TheoremRecordModel]
    n_consistent: int
    n_inconsistent: int
    n_inconclusive: int
    all_consistent: bool


class PropositionCheckRequest(BaseModel):
    nu_max: float = Field(default=10.0, gt=0.0)
    nu_step: float = Field(default=0.1, gt=0.0)
    n_max: int = Field(default=20, ge=1, le=200)


class PropositionRecordModel(BaseModel):
    nu: float
    n: int
    j_zero: float
    jprime_zero: float
    margin: float
    chains_ok: bool
    ok: bool


class PropositionCheckResponse(BaseModel):
    schema_version: int
    version: str
    config: PropositionCheckRequest
    records: list[PropositionRecordModel]
    min_margin: float
    all_ok: bool


class RoundTripRequest(BaseModel):
    l: float
    delta: float
    x_max: float = Field(default=160.0, gt=0.0)
    step: float = Field(default=1e-3, gt=0.0)
    tolerance: float = Field(default=5e-3, gt=0.0)


class RoundTripResponse(BaseModel):
    schema_version: int
    version: str
    config: RoundTripRequest
    branch: BranchModel
    delta_input_mod_pi: float
    delta_recovered: float
    abs_difference_mod_pi: float
    convergence: float
    within_tolerance: bool


def _branch_model(branch) -> BranchModel:
    return BranchModel(**branch.asdict())


ERROR_RESPONSES = {
    400: {"model": ErrorResponse, "description": "Computation failed on the given inputs"},
}


def create_app() -> FastAPI:
    app = FastAPI(title="phasepot", version=__version__)

    @app.exception_handler(PhasePotError)
    async def _domain_error(request: Request, exc: PhasePotError):
        return JSONResponse(
            status_code=400,
            content={"detail": str(exc), "error_type": type(exc).__name__},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/invert", response_model=InvertResponse, responses=ERROR_RESPONSES)
    def invert(req: InvertRequest) -> InvertResponse:
        spec = PhaseShiftSpec(l=req.l, delta=req.delta)
        table = potential_table(spec, n=req.n, x_max=req.x_max, num_points=req.num_points)
        return InvertResponse(
            schema_version=SCHEMA_VERSION,
            version=__version__,
            config=req,
            branch=_branch_model(table.branch),
            singular_points=list(table.singular_points),
            exclusion_radii=list(table.exclusion_radii),
            table=TableModel(
                x=[float(v) for v in table.grid],
                q=[float(v) for v in table.q],
                singular_flag=[bool(v) for v in table.excluded],
            ),
        )

    @app.post("/zeros", response_model=ZerosResponse, responses=ERROR_RESPONSES)
    def zeros(req: ZerosRequest) -> ZerosResponse:
        vals = [
            bessel_zero(ZeroQuery(nu=req.nu, n=k, kind=req.kind))
            for k in range(1, req.count + 1)
        ]
        return ZerosResponse(
            schema_version=SCHEMA_VERSION, version=__version__, config=req, zeros=vals
        )

    @app.post("/wronskian/scan", response_model=WronskianScanResponse, responses=ERROR_RESPONSES)
    def wronskian_scan(req: WronskianScanRequest) -> WronskianScanResponse:
        pair = PairParams(l=req.l, L=req.L)
        profile = find_roots(pair, req.x_max)
        return WronskianScanResponse(
            schema_version=SCHEMA_VERSION,
            version=__version__,
            config=req,
            nonsingular_pair=is_nonsingular_pair(pair),
            sign_origin=profile.sign_origin,
            limit_infinity=profile.limit_infinity,
            roots=list(profile.roots),
            root_brackets=[tuple(b) for b in profile.root_brackets],
            samples_x=[float(v) for v in profile.samples[:, 0]],
            samples_w=[float(v) for v in profile.samples[:, 1]],
        )

    @app.post("/checks/theorem", response_model=TheoremCheckResponse, responses=ERROR_RESPONSES)
    def check_theorem(req: TheoremCheckRequest) -> TheoremCheckResponse:
        values = np.arange(0.0, req.grid_max + 1e-12, req.grid_step)
        records = theorem_sweep(values, x_max=req.x_max)
        models = [
            TheoremRecordModel(
                l=r.l,
                L=r.L,
                n_roots=r.n_roots,
                sign_origin=r.sign_origin,
                limit_infinity=r.limit_infinity,
                expected=r.expected,
                verdict=r.verdict,
            )
            for r in records
        ]
        n_bad = sum(r.verdict == "inconsistent" for r in records)
        n_open = sum(r.verdict == "inconclusive" for r in records)
        return TheoremCheckResponse(
            schema_version=SCHEMA_VERSION,
            version=__version__,
            config=req,
            records=models,
            n_consistent=len(records) - n_bad - n_open,
            n_inconsistent=n_bad,
            n_inconclusive=n_open,
            all_consistent=n_bad == 0,
        )

    @app.post(
        "/checks/proposition",
        response_model=PropositionCheckResponse,
        responses=ERROR_RESPONSES,
    )
    def check_proposition_sweep(req: PropositionCheckRequest) -> PropositionCheckResponse:
        n_steps = int(round(req.nu_max / req.nu_step))
        nu_values = [k * req.nu_step for k in range(1, n_steps + 1)]
        records = proposition_sweep(nu_values, req.n_max)
        models = [
            PropositionRecordModel(
                nu=r.nu,
                n=r.n,
                j_zero=r.j_zero,
                jprime_zero=r.jprime_zero,
                margin=r.margin,
                chains_ok=r.chains_ok,
                ok=r.ok,
            )
            for r in records
        ]
        return PropositionCheckResponse(
            schema_version=SCHEMA_VERSION,
            version=__version__,
            config=req,
            records=models,
            min_margin=min(r.margin for r in records),
            all_ok=all(r.ok and r.chains_ok for r in records),
        )

    @app.post("/roundtrip", response_model=RoundTripResponse, responses=ERROR_RESPONSES)
    def roundtrip(req: RoundTripRequest) -> RoundTripResponse:
        spec = PhaseShiftSpec(l=req.l, delta=req.delta)
        branch = select_nonsingular(spec)
        result = solve_phase_shift(
            lambda x: potential_value(branch, x), l=req.l, x_max=req.x_max, step=req.step
        )
        target = math.remainder(req.delta, math.pi)
        if target <= -0.5 * math.pi:
            target += math.pi
        diff = abs(math.remainder(result.delta_mod_pi - target, math.pi))
        return RoundTripResponse(
            schema_version=SCHEMA_VERSION,
            version=__version__,
            config=req,
            branch=_branch_model(branch),
            delta_input_mod_pi=target,
            delta_recovered=result.delta_mod_pi,
            abs_difference_mod_pi=diff,
            convergence=result.convergence,
            within_tolerance=diff <= req.tolerance,
        )

    return app


app = create_app()


def main(argv=None) -> None:
    """Entry point of `phasepot-serve`: run the app under uvicorn."""
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(prog="phasepot-serve", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    args = parser.parse_args(argv)
    uvicorn.run(app, host=args.host, port=args.port)

"""FastAPI service exposing the scenario runner and the check catalog.

Endpoints:
    GET  /health              liveness and version
    GET  /checks              catalog of check ids with claims
    GET  /checks/{check_id}   describe one check
    POST /scenarios/run       run a scenario, return the reports

Domain validation problems map to HTTP 422; a numerical conditioning
abort is a legitimate run outcome and is returned as a normal response
with status "conditioning_abort" and exit code 4.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse

from . import __version__
from .checks import REGISTRY
from .errors import ConditioningError, ConfigError, InvalidSpecError, QuadratureError
from .reporting import report_to_dict
from .scenario import EXIT_CONDITIONING, exit_code_for, run_scenario
from .schemas import CheckInfo, HealthResponse, RunRequest, RunResponse, SCHEMA_VERSION

app = FastAPI(
    title="kmslab",
    version=__version__,
    description="Numerical laboratory for KMS-symmetric energy forms and Markovian "
    "semigroups on truncated Fock spaces: builds the modular objects, assembles "
    "generators two independent ways, exponentiates them spectrally and certifies "
    "every finite-checkable claim with machine-readable reports.",
)


@app.exception_handler(ConfigError)
@app.exception_handler(InvalidSpecError)
@app.exception_handler(QuadratureError)
async def _domain_validation_error(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def _check_info(cdef) -> CheckInfo:
    return CheckInfo(id=cdef.id, claim=cdef.claim, description=cdef.description,
                     params=list(cdef.params))


@app.get("/checks", response_model=list[CheckInfo])
def list_checks() -> list[CheckInfo]:
    return [_check_info(REGISTRY[k]) for k in sorted(REGISTRY)]


@app.get("/checks/{check_id}", response_model=CheckInfo)
def describe_check(check_id: str) -> CheckInfo:
    if check_id not in REGISTRY:
        raise HTTPException(status_code=404, detail=f"unknown check id {check_id!r}")
    return _check_info(REGISTRY[check_id])


@app.post("/scenarios/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    seed = request.seed if request.seed is not None else request.scenario.seed
    try:
        reports = run_scenario(request.scenario, seed=seed, jobs=request.jobs)
    except ConditioningError as exc:
        return RunResponse(
            schema_version=SCHEMA_VERSION,
            scenario=request.scenario.name,
            seed=seed,
            status="conditioning_abort",
            exit_code=EXIT_CONDITIONING,
            reports=[],
        )
    code = exit_code_for(reports)
    return RunResponse(
        schema_version=SCHEMA_VERSION,
        scenario=request.scenario.name,
        seed=seed,
        status="ok" if code == 0 else "check_failed",
        exit_code=code,
        reports=[report_to_dict(r) for r in reports],
    )

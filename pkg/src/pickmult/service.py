"""HTTP facade over the experiment pipelines.

One POST endpoint per experiment kind plus a health probe. Config errors map
to 400 (client should fix the payload), numerical failures to 500 (the
computation itself could not be trusted). Both carry the CLI exit code the
condition corresponds to, so thin clients can translate without parsing
messages.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import schemas
from .errors import ConfigError, NumericalError
from .experiments import (
    run_disjoint_union,
    run_extension_probe,
    run_holomap_check,
    run_operator_r,
    run_pick_norm,
)

SERVICE_NAME = "pickmult"


def _guarded(fn, req) -> schemas.RunResponse:
    try:
        return fn(req)
    except ConfigError as exc:
        raise HTTPException(
            status_code=400,
            detail={"code": 2, "kind": type(exc).__name__, "error": str(exc)},
        ) from exc
    except NumericalError as exc:
        raise HTTPException(
            status_code=500,
            detail={"code": 3, "kind": type(exc).__name__, "error": str(exc)},
        ) from exc


def create_app() -> FastAPI:
    from . import __version__

    app = FastAPI(title=SERVICE_NAME, version=__version__)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(
            status="ok", service=SERVICE_NAME, version=__version__
        )

    @app.post("/experiments/pick-norm", response_model=schemas.RunResponse)
    def pick_norm(req: schemas.PickNormRequest) -> schemas.RunResponse:
        return _guarded(run_pick_norm, req)

    @app.post("/experiments/holomap-check", response_model=schemas.RunResponse)
    def holomap_check(req: schemas.HolomapCheckRequest) -> schemas.RunResponse:
        return _guarded(run_holomap_check, req)

    @app.post("/experiments/operator-r", response_model=schemas.RunResponse)
    def operator_r(req: schemas.OperatorRRequest) -> schemas.RunResponse:
        return _guarded(run_operator_r, req)

    @app.post("/experiments/extension-probe", response_model=schemas.RunResponse)
    def extension_probe(req: schemas.ExtensionProbeRequest) -> schemas.RunResponse:
        return _guarded(run_extension_probe, req)

    @app.post("/experiments/disjoint-union", response_model=schemas.RunResponse)
    def disjoint_union(req: schemas.DisjointUnionRequest) -> schemas.RunResponse:
        return _guarded(run_disjoint_union, req)

    return app

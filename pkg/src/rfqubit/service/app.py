"""HTTP face of the simulator.

Endpoints mirror the CLI subcommands one-to-one and return the same bytes.
Domain errors map to 400 with a positioned diagnostic; request-shape errors
are FastAPI's usual 422.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from ..errors import RfqubitError
from . import handlers
from .models import (
    FbsDemoRequest,
    FidelitySweepRequest,
    HwpRotateRequest,
    LossBudgetRequest,
    NetlistRunRequest,
)

app = FastAPI(title="rfqubit", version="0.1.0")


@app.exception_handler(RfqubitError)
async def _domain_error(_: Request, exc: RfqubitError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={
            "error": type(exc).__name__,
            "message": str(exc),
            "line": getattr(exc, "line", None),
            "column": getattr(exc, "column", None),
        },
    )


@app.get("/health")
async def health() -> dict:
    return {"status": "ok"}


@app.post("/fbs-demo")
async def fbs_demo(req: FbsDemoRequest) -> Response:
    content, media_type = handlers.fbs_demo(req)
    return Response(content=content, media_type=media_type)


@app.post("/hwp-rotate")
async def hwp_rotate(req: HwpRotateRequest) -> Response:
    content, media_type = handlers.hwp_rotate(req)
    return Response(content=content, media_type=media_type)


@app.post("/fidelity-sweep")
async def fidelity_sweep(req: FidelitySweepRequest) -> Response:
    content, media_type = handlers.sweep(req)
    return Response(content=content, media_type=media_type)


@app.post("/loss-budget")
async def loss_budget(req: LossBudgetRequest) -> Response:
    content, media_type = handlers.loss_budget(req)
    return Response(content=content, media_type=media_type)


@app.post("/netlist/run")
async def netlist_run(req: NetlistRunRequest) -> Response:
    content, media_type = handlers.netlist_run(req)
    return Response(content=content, media_type=media_type)

"""HTTP service: classification, rendering, sweeps and the embedded tables.

Validation failures answer 422 and internal table or sector mismatches answer
409, both with a JSON body ``{"schema", "error", "detail"}``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from .builder import trace_separatrices
from .charts import ChartId
from .classify import SCHEMA, Classification, classify
from .connection import InconclusiveNearBoundary, detect_connection_boundary
from .finite import TableMismatch
from .infinity import SectorMismatch, verify_origin_sectors
from .params import NotNormalizable, UnclassifiableParameters
from .render import render_svg
from .schemas import (
    CensusOut,
    ClassificationOut,
    ClassifyRequest,
    RenderRequest,
    SkeletonOut,
    SweepRequest,
    TablesOut,
)
from .skeleton import MalformedSkeleton, compute_invariants
from .sweep import SweepSpecError, sweep
from .tables import all_tables, class_from_invariants

app = FastAPI(title="kolportrait", version="0.1.0")


def _error(status: int, exc: Exception) -> JSONResponse:
    body = {"schema": SCHEMA, "error": type(exc).__name__, "detail": str(exc)}
    return JSONResponse(body, status_code=status)


@app.exception_handler(TableMismatch)
@app.exception_handler(SectorMismatch)
async def _mismatch(request: Request, exc: Exception):
    return _error(409, exc)


@app.exception_handler(NotNormalizable)
@app.exception_handler(UnclassifiableParameters)
@app.exception_handler(SweepSpecError)
@app.exception_handler(MalformedSkeleton)
async def _invalid(request: Request, exc: Exception):
    return _error(422, exc)


@app.exception_handler(RequestValidationError)
async def _request_invalid(request: Request, exc: RequestValidationError):
    errors = "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
    return JSONResponse({"schema": SCHEMA, "error": "ValidationError", "detail": errors}, status_code=422)


def _traced(c: Classification) -> dict:
    q = c.normalized
    sk = trace_separatrices(q)
    vec = compute_invariants(sk)
    out = {
        "invariants": list(vec),
        "R": class_from_invariants(vec),
        "skeleton": sk.to_dict(),
    }
    out["agrees"] = out["R"] == c.r
    out["sectors"] = {
        name: verify_origin_sectors(q, chart, label).to_dict()
        for name, chart, label in (("O1", ChartId.U1, c.o1), ("O2", ChartId.U2, c.o2))
    }
    if c.case.subcase in ("1.2", "1.3") and c.case.b1_sign > 0:
        try:
            out["connection"] = detect_connection_boundary(q).to_dict()
        except InconclusiveNearBoundary as exc:
            out["connection"] = exc.report.to_dict()
    return out


@app.post("/classify", response_model=ClassificationOut)
def classify_endpoint(req: ClassifyRequest):
    c = classify(req.params.point(), req.epsilon_param, req.epsilon_conn)
    out = c.to_dict()
    if req.with_tracing:
        out["traced"] = _traced(c)
    return out


@app.post("/render", response_model=SkeletonOut, responses={200: {"content": {"image/svg+xml": {}}}})
def render_endpoint(req: RenderRequest):
    c = classify(req.params.point(), req.epsilon_param, req.epsilon_conn)
    t = c.transform
    # the skeleton is traced for the normalized point and mapped back to the input's coordinates
    sk = trace_separatrices(c.normalized).transformed(t.flip_y, t.flip_z, t.reverse_time)
    if req.format == "svg":
        return Response(render_svg(sk, title=f"{c.g} ({c.r})"), media_type="image/svg+xml")
    vec = compute_invariants(sk)
    return {"schema": SCHEMA, "G": c.g, "R": c.r, "invariants": list(vec), "skeleton": sk.to_dict()}


@app.post("/sweep", response_model=CensusOut)
def sweep_endpoint(req: SweepRequest):
    census = sweep(
        req.spec,
        with_tracing=req.with_tracing,
        eps=req.epsilon_param,
        eps_conn=req.epsilon_conn,
        jobs=req.jobs,
        samples=req.samples,
        seed=req.seed,
    )
    return census.to_dict(include_samples=req.include_samples)


@app.get("/tables", response_model=TablesOut)
def tables_endpoint():
    return {"schema": SCHEMA, "tables": all_tables()}

"""HTTP session service.

Thin wrappers over the session operations: every endpoint loads the
session, applies exactly one library call and saves. All computation stays
server-side so any client (the bundled lab UI or a script) sees identical
numbers. Responses always carry ``schema_version``; errors come back as
structured bodies with a machine-readable code.
"""

from __future__ import annotations

import dataclasses
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import DETERMINISTIC, STOCHASTIC, ExperimentKind
from .errors import (
    PopGenError,
    SessionNotFoundError,
    TerminalSessionError,
    ValidationError,
)
from .genetics import GenotypeCounts
from .rng import fresh_seed
from .session import (
    LINE_GRAPH,
    SCHEMA_VERSION,
    auto_step,
    chart_series,
    create_session,
    export_csv,
    record_manual_counts,
    record_payload,
    session_payload,
    update_manual_counts,
)
from .store import SessionStore


class CreateSessionRequest(BaseModel):
    kind: str
    n: int = 50
    fitness: tuple[float, float, float] = (1.0, 1.0, 1.0)
    migration_rate: float = 0.0
    migrant_freq: float = 0.5
    generations: int = 10
    seed: int | None = None
    mode: str | None = None
    p0: float | None = None


class EnterCountsRequest(BaseModel):
    AA: int
    Aa: int
    aa: int
    t: int | None = None
    note: str = ""


def _envelope(payload: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, **payload}


def create_app(
    store: SessionStore | None = None, static_dir: str | Path | None = None
) -> FastAPI:
    """Build the service. ``static_dir`` hosts the lab UI bundle at /."""
    store = store if store is not None else SessionStore()
    app = FastAPI(title="popgenlab", version="0.1.0")
    app.state.store = store

    @app.exception_handler(PopGenError)
    async def _domain_error(request: Request, exc: PopGenError):
        if isinstance(exc, SessionNotFoundError):
            status = 404
        elif isinstance(exc, TerminalSessionError):
            status = 409
        else:
            status = 400
        error = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, ValidationError):
            error["fields"] = exc.fields
        return JSONResponse(status_code=status, content=_envelope({"error": error}))

    @app.exception_handler(RequestValidationError)
    async def _malformed_body(request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(x) for x in e.get("loc", ())], "msg": e.get("msg", "")}
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content=_envelope(
                {"error": {"code": "malformed_body", "message": "invalid request body", "detail": detail}}
            ),
        )

    @app.post("/api/sessions")
    def create(req: CreateSessionRequest):
        try:
            kind = ExperimentKind(req.kind)
        except ValueError:
            valid = ", ".join(k.value for k in ExperimentKind)
            raise ValidationError({"kind": f"must be one of {valid}, got {req.kind!r}"}) from None
        mode = req.mode
        if mode is None:
            mode = DETERMINISTIC if kind is ExperimentKind.AUTOMATED else STOCHASTIC
        session = create_session(
            kind,
            n=req.n,
            fitness=req.fitness,
            migration_rate=req.migration_rate,
            migrant_freq=req.migrant_freq,
            generations=req.generations,
            seed=req.seed if req.seed is not None else fresh_seed(),
            mode=mode,
            p0=req.p0,
        )
        store.save(session)
        return _envelope({"session": session_payload(session)})

    @app.get("/api/sessions/{session_id}")
    def fetch(session_id: str):
        return _envelope({"session": session_payload(store.load(session_id))})

    @app.post("/api/sessions/{session_id}/generations")
    def enter_counts(session_id: str, req: EnterCountsRequest):
        with store.lock(session_id):
            session = store.load(session_id)
            counts = GenotypeCounts(AA=req.AA, Aa=req.Aa, aa=req.aa)
            if req.t is not None and req.t < session.next_generation:
                record = update_manual_counts(session, req.t, counts, note=req.note or None)
            else:
                t = req.t if req.t is not None else session.next_generation
                record = record_manual_counts(session, t, counts, note=req.note)
            store.save(session)
            return _envelope(
                {"record": record_payload(record), "session": session_payload(session)}
            )

    @app.post("/api/sessions/{session_id}/auto-step")
    def step(session_id: str):
        with store.lock(session_id):
            session = store.load(session_id)
            record = auto_step(session)
            store.save(session)
            return _envelope(
                {"record": record_payload(record), "session": session_payload(session)}
            )

    @app.get("/api/sessions/{session_id}/charts")
    def charts(session_id: str, variant: str = LINE_GRAPH):
        series = chart_series(store.load(session_id), variant)
        return _envelope({"chart": dataclasses.asdict(series)})

    @app.get("/api/sessions/{session_id}/export.csv")
    def export(session_id: str):
        data = export_csv(store.load(session_id))
        return Response(
            content=data,
            media_type="text/csv",
            headers={"Content-Disposition": f"attachment; filename={session_id}.csv"},
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app

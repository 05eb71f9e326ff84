"""HTTP facade over the session pipeline for the workbench UI.

JSON over HTTP; error bodies are ``{"code": ..., "message": ...}`` with codes
mirroring the pipeline's error taxonomy. Session creation supports an
optional Idempotency-Key header so a retrying client cannot double-spend
live provider calls.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import (
    DuplicateIdempotencyKeyError,
    ProviderError,
    SessionStoreError,
    SpecmtError,
    UnknownLabelError,
    UnknownSessionError,
    ValidationError,
)
from .gateway import ProviderGateway
from .model import SourceSegment, spec_from_dict, strategy_from_dict
from .ranking import Candidate, report_to_dict, substitution_analysis
from .sessions import SessionStore, record_selection, record_to_dict, run_session

_STATUS_BY_ERROR: tuple[tuple[type[SpecmtError], int], ...] = (
    (UnknownLabelError, 422),
    (UnknownSessionError, 404),
    (DuplicateIdempotencyKeyError, 409),
    (ValidationError, 400),
    (ProviderError, 502),
    (SessionStoreError, 500),
)


def _status_for(error: SpecmtError) -> int:
    for error_type, status in _STATUS_BY_ERROR:
        if isinstance(error, error_type):
            return status
    return 500


class SegmentBody(BaseModel):
    text: str
    id: str | None = None


class ReferenceBody(BaseModel):
    label: str
    text: str


class CreateSessionBody(BaseModel):
    spec: dict
    segment: SegmentBody
    strategy: dict = Field(default_factory=lambda: {"kind": "spec_conditioned"})
    n: int = 1
    references: list[ReferenceBody] = Field(default_factory=list)
    multi_call: bool = False


class SelectionBody(BaseModel):
    label: str
    edited_text: str | None = None


class SubstitutionBody(BaseModel):
    frame: str
    entities: list[str]
    source: str


def _record_payload(record, include_raw: bool) -> dict:
    payload = record_to_dict(record)
    if not include_raw:
        payload.pop("raw_response")
    return payload


def create_app(
    store: SessionStore,
    gateway: ProviderGateway,
    *,
    cors_origins: tuple[str, ...] = ("*",),
    static_dir: str | None = None,
) -> FastAPI:
    app = FastAPI(title="specmt", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    idempotency_keys: dict[str, str] = {}
    idempotency_lock = threading.Lock()

    @app.exception_handler(SpecmtError)
    async def _specmt_error(request: Request, exc: SpecmtError):
        return JSONResponse(
            status_code=_status_for(exc), content={"code": exc.code, "message": str(exc)}
        )

    @app.exception_handler(RequestValidationError)
    async def _body_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"code": "request.invalid", "message": str(exc)}
        )

    @app.get("/api/health")
    def health():
        return {"status": "ok", "mode": gateway.config.mode}

    @app.post("/api/sessions", status_code=201)
    def create_session(
        body: CreateSessionBody,
        include: str | None = Query(default=None),
        idempotency_key: str | None = Header(default=None, alias="Idempotency-Key"),
    ):
        if idempotency_key is not None:
            with idempotency_lock:
                if idempotency_key in idempotency_keys:
                    raise DuplicateIdempotencyKeyError(
                        idempotency_key, idempotency_keys[idempotency_key]
                    )
        spec = spec_from_dict(body.spec)
        strategy = strategy_from_dict(body.strategy)
        segment_kwargs = {"text": body.segment.text}
        if body.segment.id:
            segment_kwargs["id"] = body.segment.id
        segment = SourceSegment(**segment_kwargs)
        references = [
            Candidate(label=ref.label, text=ref.text, origin="reference")
            for ref in body.references
        ]
        record = run_session(
            spec,
            segment,
            strategy,
            body.n,
            references,
            gateway=gateway,
            store=store,
            multi_call=body.multi_call,
        )
        if idempotency_key is not None:
            with idempotency_lock:
                idempotency_keys[idempotency_key] = record.session_id
        return _record_payload(record, include == "raw")

    @app.get("/api/sessions")
    def list_sessions():
        return {"sessions": store.list()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str, include: str | None = Query(default=None)):
        record = store.load(session_id)
        return _record_payload(record, include == "raw")

    @app.post("/api/sessions/{session_id}/selection")
    def select(session_id: str, body: SelectionBody):
        record = record_selection(store, session_id, body.label, body.edited_text)
        return _record_payload(record, include_raw=False)

    @app.post("/api/substitutions")
    def substitute(body: SubstitutionBody):
        if not body.source.strip():
            raise ValidationError("source must be non-empty", code="substitution.source.empty")
        source = SourceSegment(text=body.source)
        source_vec = gateway.embed(body.source)
        report = substitution_analysis(
            body.frame, body.entities, source, source_vec, gateway.embed
        )
        return report_to_dict(report)

    if static_dir:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="workbench")

    return app

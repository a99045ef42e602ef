"""Session-oriented HTTP/JSON service for comparison and conflict resolution.

Sessions live in memory only (LRU-capped); restarting the server drops them.
Model payloads travel as XML strings inside JSON bodies, keeping the XML file
format the single model interchange format.
"""

from __future__ import annotations

import secrets
import threading
from collections import OrderedDict
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel, Field

from . import merge
from .merge import (
    AlreadyResolvedError,
    Choice,
    Session,
    SessionError,
    SessionState,
    StructuralNotResolvableError,
    UnknownConflictError,
    UnresolvedConflictsError,
    WrongStateError,
)
from .model import FeatureModel
from .xmlio import parse_xml, serialize_xml

MAX_MODEL_BYTES = 1024 * 1024
DEFAULT_CAPACITY = 64


class SessionStore:
    """LRU map of unguessable tokens to sessions; single writer per session."""

    def __init__(self, capacity: int = DEFAULT_CAPACITY):
        self.capacity = capacity
        self._lock = threading.Lock()
        self._sessions: "OrderedDict[str, Session]" = OrderedDict()
        self._session_locks: dict[str, threading.Lock] = {}

    def put(self, session: Session) -> str:
        token = secrets.token_urlsafe(32)
        with self._lock:
            self._sessions[token] = session
            self._session_locks[token] = threading.Lock()
            while len(self._sessions) > self.capacity:
                evicted, _ = self._sessions.popitem(last=False)
                del self._session_locks[evicted]
        return token

    def get(self, token: str) -> Optional[Session]:
        with self._lock:
            session = self._sessions.get(token)
            if session is not None:
                self._sessions.move_to_end(token)
            return session

    def lock_for(self, token: str) -> Optional[threading.Lock]:
        with self._lock:
            return self._session_locks.get(token)

    def replace(self, token: str, session: Session) -> None:
        with self._lock:
            if token in self._sessions:
                self._sessions[token] = session


class CreateSessionBody(BaseModel):
    base_xml: str
    other_xml: str
    tau: float = Field(default=0.85, gt=0, le=1)
    theta: float = Field(default=0.95, gt=0, le=1)


class ResolutionBody(BaseModel):
    choice: str


def _report_payload(report) -> dict:
    return {
        "estsin": report.estsin,
        "estsem": report.estsem,
        "estest": report.estest,
        "cee": report.cee,
        "syntactic_vector": list(report.syntactic_vector),
        "semantic_vector": list(report.semantic_vector),
        "structural_vector": list(report.structural_vector),
        "f_denominator": report.f_denominator,
        "c_denominator": report.c_denominator,
        "mode": report.recommended_mode.value,
    }


def _conflict_payload(c) -> dict:
    return {
        "id": c.id,
        "kind": c.kind.value,
        "base_feature": c.base_feature,
        "other_feature": c.other_feature,
        "base_value": c.base_value,
        "other_value": c.other_value,
        "resolvable": c.resolvable,
        "status": "resolved" if c.resolved else "unresolved",
        "resolution": c.resolution.value if c.resolution else None,
    }


def _tree_payload(model: FeatureModel, fid: Optional[str] = None) -> dict:
    f = model.features[fid or model.root_id]
    return {
        "id": f.id,
        "name": f.name,
        "rel_kind": f.rel_kind.value,
        "abstract": f.abstract,
        "children": [_tree_payload(model, c) for c in f.children],
    }


def _session_payload(token: str, session: Session) -> dict:
    return {
        "session_id": token,
        "state": session.state.value,
        "report": _report_payload(session.report),
        "conflicts": [_conflict_payload(c) for c in session.conflicts],
        "base_tree": _tree_payload(session.base),
        "other_tree": _tree_payload(session.other),
        "base_name": session.base.name,
        "other_name": session.other.name,
        "post_report": _report_payload(session.post_report) if session.post_report else None,
        "merged_tree": _tree_payload(session.merged_model) if session.merged_model else None,
    }


def create_app(
    ui_dir: Optional[str] = None,
    allow_cors: bool = False,
    capacity: int = DEFAULT_CAPACITY,
) -> FastAPI:
    app = FastAPI(title="fmit", docs_url=None, redoc_url=None)
    store = SessionStore(capacity=capacity)
    app.state.store = store

    if allow_cors:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
        )

    def error(status: int, message: str, **extra) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message, **extra})

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        for label, xml in (("base", body.base_xml), ("other", body.other_xml)):
            if len(xml.encode("utf-8")) > MAX_MODEL_BYTES:
                return error(413, f"{label} model exceeds {MAX_MODEL_BYTES} bytes")
        diagnostics = {}
        models = {}
        for label, xml in (("base", body.base_xml), ("other", body.other_xml)):
            result = parse_xml(xml.encode("utf-8"), model_name=label)
            diagnostics[label] = [
                {"severity": d.severity.value, "location": d.location, "message": d.message}
                for d in result.diagnostics
            ]
            models[label] = result.model
        if models["base"] is None or models["other"] is None:
            return error(400, "model parse failed", diagnostics=diagnostics)
        try:
            session = merge.start_session(models["base"], models["other"], body.tau, body.theta)
        except (SessionError, ValueError) as exc:
            return error(400, str(exc))
        token = store.put(session)
        return _session_payload(token, session)

    @app.get("/api/sessions/{sid}")
    def get_session(sid: str):
        session = store.get(sid)
        if session is None:
            return error(404, "unknown session")
        return _session_payload(sid, session)

    @app.post("/api/sessions/{sid}/conflicts/{cid}/resolution")
    def resolve_conflict(sid: str, cid: int, body: ResolutionBody):
        if body.choice not in ("keep_base", "keep_other"):
            return error(400, "choice must be 'keep_base' or 'keep_other'")
        lock = store.lock_for(sid)
        if lock is None:
            return error(404, "unknown session")
        with lock:
            session = store.get(sid)
            if session is None:
                return error(404, "unknown session")
            try:
                updated = merge.resolve(session, cid, Choice(body.choice))
            except UnknownConflictError as exc:
                return error(404, str(exc))
            except (AlreadyResolvedError, StructuralNotResolvableError, WrongStateError) as exc:
                return error(409, str(exc))
            store.replace(sid, updated)
            return _conflict_payload(updated.conflict(cid))

    @app.post("/api/sessions/{sid}/finalize")
    def finalize_session(sid: str):
        lock = store.lock_for(sid)
        if lock is None:
            return error(404, "unknown session")
        with lock:
            session = store.get(sid)
            if session is None:
                return error(404, "unknown session")
            try:
                finalized = merge.finalize(session)
            except UnresolvedConflictsError as exc:
                return error(409, "unresolved conflicts", unresolved=exc.ids)
            except WrongStateError as exc:
                return error(409, str(exc))
            store.replace(sid, finalized)
            return {
                "merged_xml": serialize_xml(finalized.merged_model).decode("utf-8"),
                "post_report": _report_payload(finalized.post_report),
                "merged_tree": _tree_payload(finalized.merged_model),
                "state": finalized.state.value,
            }

    @app.get("/api/sessions/{sid}/merged.xml")
    def merged_xml(sid: str):
        session = store.get(sid)
        if session is None:
            return error(404, "unknown session")
        if session.state is not SessionState.FINALIZED:
            return error(409, "session is not finalized")
        return Response(
            content=serialize_xml(session.merged_model), media_type="application/xml"
        )

    ui_path = Path(ui_dir) if ui_dir else Path("frontend/dist")

    @app.get("/")
    def index():
        index_file = ui_path / "index.html"
        if index_file.is_file():
            return FileResponse(index_file)
        return JSONResponse({"service": "fmit", "ui": "not built"})

    @app.get("/assets/{name}")
    def asset(name: str):
        # Flat asset directory; reject traversal.
        if "/" in name or "\\" in name or name.startswith("."):
            return error(404, "not found")
        candidate = ui_path / "assets" / name
        if candidate.is_file():
            return FileResponse(candidate)
        return error(404, "not found")

    return app

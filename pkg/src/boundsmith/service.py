"""HTTP facade for the explorer UI: models, commands, concurrent sessions.

Sessions are in-memory and pull-based (the client POSTs /next); completed
enumerations are persisted to the scenario cache when one is configured, and
later sessions for the same (model, command, size) replay from it without
touching the solver.
"""
from __future__ import annotations

import hashlib
import itertools
import os
import threading
import time
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .enumeration import EXHAUSTED, EnumerationSession
from .lang.ast import Model, ModelError
from .lang.parser import parse_model
from .lang.resolver import resolve_model
from .strategies import (
    CachedReplay, ScenarioCache, enumerate_analyzer_mode, enumerate_baseline,
    masked_source_hash,
)


class ModelBody(BaseModel):
    text: str


class SessionBody(BaseModel):
    modelId: str
    command: str
    size: int | None = None
    mode: str = "reach"


class DeepenBody(BaseModel):
    command: str
    newScope: int


@dataclass
class _SessionEntry:
    id: str
    model_id: str
    command: str
    size: int | None
    mode: str
    session: object
    created_at: float
    lock: threading.Lock = field(default_factory=threading.Lock)
    scenarios: list = field(default_factory=list)

    def resource(self) -> dict:
        return {
            "id": self.id,
            "modelId": self.model_id,
            "command": self.command,
            "size": self.size,
            "mode": self.mode,
            "state": self.session.state,
            "counts": dict(self.session.phase_counts),
            "scenarios": self.session.ordinal,
            "createdAt": self.created_at,
        }


def _model_summary(model_id: str, source: str, model: Model) -> dict:
    return {
        "modelId": model_id,
        "sigs": [
            {
                "name": s.name,
                "abstract": s.is_abstract,
                "one": s.is_one,
                "parent": s.parent,
                "fields": [
                    {"name": f.name, "mult": f.mult, "target": f.target}
                    for f in s.fields
                ],
            }
            for s in model.sigs
        ],
        "commands": [{"name": c.name, "scope": c.scope} for c in model.commands],
    }


def create_app(model_dir: str | None = None, cache_dir: str | None = None,
               serve_ui: bool = False) -> FastAPI:
    app = FastAPI(title="boundsmith", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    def invalid_body(request, exc):
        # 422 is reserved for model diagnostics; malformed bodies are 400
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    models: dict[str, tuple[str, Model]] = {}
    sessions: dict[str, _SessionEntry] = {}
    session_ids = itertools.count()
    store_lock = threading.Lock()
    cache = ScenarioCache(cache_dir) if cache_dir else None

    def _register(text: str):
        try:
            model = resolve_model(parse_model(text))
        except ModelError as exc:
            raise HTTPException(
                status_code=422,
                detail=[{"message": exc.message, "line": exc.pos.line, "col": exc.pos.col}],
            )
        model_id = hashlib.sha256(text.encode()).hexdigest()[:12]
        with store_lock:
            models[model_id] = (text, model)
        return model_id, model

    if model_dir:
        for entry in sorted(os.listdir(model_dir)):
            if entry.endswith(".bsm"):
                with open(os.path.join(model_dir, entry)) as fh:
                    _register(fh.read())

    def _get_model(model_id: str) -> tuple[str, Model]:
        try:
            return models[model_id]
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown model")

    def _covered(model_id: str, command: str) -> set[int]:
        """Sizes that need no new session: already enumerated (here or in the
        cache) or backed by a live session."""
        done = {
            e.size
            for e in sessions.values()
            if e.model_id == model_id and e.command == command
            and e.mode == "reach" and e.size is not None
        }
        if cache is not None:
            source, _ = _get_model(model_id)
            done |= cache.completed_sizes(masked_source_hash(source, command), command)
        return done

    def _open_session(model_id: str, command_name: str, size: int | None, mode: str,
                      scope_override: int | None = None):
        source, model = _get_model(model_id)
        try:
            command = model.command(command_name)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown command")
        if scope_override is not None and scope_override > command.scope:
            command = replace(command, scope=scope_override)
        if mode not in ("reach", "baseline", "analyzer"):
            raise HTTPException(status_code=400, detail="unknown mode")
        if mode == "analyzer":
            size = None
            session = enumerate_analyzer_mode(model, command)
        else:
            if size is None or not 0 <= size <= command.scope:
                raise HTTPException(
                    status_code=400, detail=f"size must lie within 0..{command.scope}"
                )
            if mode == "baseline":
                session = enumerate_baseline(model, command, size)
            else:
                session = None
                if cache is not None:
                    model_hash = masked_source_hash(source, command_name)
                    if cache.has_scenarios(model_hash, command_name, size):
                        session = CachedReplay(
                            cache.read_scenarios(model_hash, command_name, size),
                            cache.read_meta(model_hash, command_name, size),
                            size,
                        )
                if session is None:
                    session = EnumerationSession(model, command, size)
        with store_lock:
            entry = _SessionEntry(
                id=f"s{next(session_ids)}",
                model_id=model_id,
                command=command_name,
                size=size,
                mode=mode,
                session=session,
                created_at=time.time(),
            )
            sessions[entry.id] = entry
        return entry

    # ---------------------------------------------------------------- routes
    @app.post("/models", status_code=201)
    def post_model(body: ModelBody):
        model_id, model = _register(body.text)
        return _model_summary(model_id, body.text, model)

    @app.get("/models/{model_id}")
    def get_model(model_id: str):
        source, model = _get_model(model_id)
        return _model_summary(model_id, source, model)

    @app.post("/sessions", status_code=201)
    def post_session(body: SessionBody):
        entry = _open_session(body.modelId, body.command, body.size, body.mode)
        return entry.resource()

    @app.get("/sessions")
    def list_sessions():
        return [e.resource() for e in sessions.values()]

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return entry.resource()

    @app.post("/sessions/{session_id}/next")
    def next_scenario(session_id: str):
        entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        with entry.lock:
            if entry.session.state == "exhausted":
                return JSONResponse(status_code=409, content={"status": "exhausted"})
            scenario = entry.session.next_scenario()
            if scenario is EXHAUSTED:
                _persist(entry)
                return {"status": "exhausted", "counts": dict(entry.session.phase_counts)}
            entry.scenarios.append(scenario)
            if entry.session.state == "exhausted":
                _persist(entry)
            return scenario.to_doc()

    def _persist(entry: _SessionEntry) -> None:
        if (
            cache is None
            or entry.mode != "reach"
            or entry.size is None
            or isinstance(entry.session, CachedReplay)
        ):
            return
        source, _ = _get_model(entry.model_id)
        model_hash = masked_source_hash(source, entry.command)
        cache.write(
            model_hash,
            entry.command,
            entry.size,
            entry.session.metrics(entry.model_id),
            entry.scenarios,
        )

    @app.get("/sessions/{session_id}/metrics")
    def session_metrics(session_id: str):
        entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return entry.session.metrics(entry.model_id).to_doc()

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        if session_id not in sessions:
            raise HTTPException(status_code=404, detail="unknown session")
        with store_lock:
            del sessions[session_id]

    @app.post("/models/{model_id}/deepen")
    def deepen(model_id: str, body: DeepenBody):
        source, model = _get_model(model_id)
        try:
            command = model.command(body.command)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown command")
        if body.newScope < 1:
            raise HTTPException(status_code=400, detail="newScope must be >= 1")
        done = _covered(model_id, body.command)
        start = max(done) + 1 if done else 0
        created = []
        for size in range(start, body.newScope + 1):
            created.append(
                _open_session(
                    model_id, body.command, size, "reach",
                    scope_override=body.newScope,
                ).resource()
            )
        return created

    if serve_ui:
        from fastapi.staticfiles import StaticFiles

        ui_root = os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
        ui_root = os.path.abspath(ui_root)
        if os.path.isdir(ui_root):
            app.mount("/ui", StaticFiles(directory=ui_root, html=True), name="ui")

    return app

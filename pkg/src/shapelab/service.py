"""HTTP service over compiled programs and live sessions.

Programs are cached by content hash, so compiling the same source twice
returns the same id. Sessions hold interpreter state server-side; the
registry caps live sessions and drops ones idle past the configured window.
Malformed requests get 400, unknown ids 404, and program problems 422 with
the same diagnostics the CLI prints.
"""

from __future__ import annotations

import threading
import time
import uuid
from collections import OrderedDict
from dataclasses import dataclass, field

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .colors import PALETTE, Color
from .compiler import CompiledProgram, compile_source
from .errors import EvalError
from .runtime import Session
from .values import value_to_json

DEFAULT_SESSION_CAP = 256
DEFAULT_IDLE_SECONDS = 30 * 60
PROGRAM_CAP = 1024


@dataclass
class _Entry:
    session: Session
    program_id: str
    created: float = 0.0
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = 0.0


class _Registry:
    def __init__(self, cap: int, idle_seconds: float, time_fn):
        self.cap = cap
        self.idle_seconds = idle_seconds
        self.time_fn = time_fn
        self.entries: OrderedDict[str, _Entry] = OrderedDict()
        self.lock = threading.Lock()

    def sweep(self) -> None:
        now = self.time_fn()
        with self.lock:
            stale = [
                sid
                for sid, entry in self.entries.items()
                if now - entry.last_used > self.idle_seconds
            ]
            for sid in stale:
                del self.entries[sid]

    def get(self, sid: str) -> _Entry | None:
        with self.lock:
            entry = self.entries.get(sid)
            if entry is None:
                return None
            entry.last_used = self.time_fn()
            self.entries.move_to_end(sid)
            return entry

    def add(self, sid: str, entry: _Entry) -> None:
        with self.lock:
            entry.last_used = self.time_fn()
            self.entries[sid] = entry
            while len(self.entries) > self.cap:
                self.entries.popitem(last=False)

    def remove(self, sid: str) -> bool:
        with self.lock:
            return self.entries.pop(sid, None) is not None


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def _diagnostics_json(diagnostics) -> list[dict]:
    return [d.to_json() for d in diagnostics]


def create_app(
    allow_origins: list[str] | None = None,
    session_cap: int = DEFAULT_SESSION_CAP,
    idle_seconds: float = DEFAULT_IDLE_SECONDS,
    time_fn=time.monotonic,
) -> FastAPI:
    app = FastAPI(title="shapelab", docs_url=None, redoc_url=None)
    if allow_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=allow_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    programs: OrderedDict[str, CompiledProgram] = OrderedDict()
    programs_lock = threading.Lock()
    sessions = _Registry(session_cap, idle_seconds, time_fn)

    @app.exception_handler(RequestValidationError)
    async def _bad_request(request: Request, exc: RequestValidationError):
        return _error(400, "Request body must be valid JSON with the documented fields.")

    @app.get("/health")
    def health() -> dict:
        return {"ok": True}

    @app.get("/palette")
    def palette() -> dict:
        colors = [
            {"name": name, "rgb": [r, g, b], "hex": Color(r, g, b).hex()}
            for name, (r, g, b) in PALETTE.items()
        ]
        return {"colors": colors}

    @app.post("/compile")
    def compile_endpoint(body: dict = Body(...)):
        source = body.get("source")
        if not isinstance(source, str):
            return _error(400, "Field 'source' must be a string.")
        result = compile_source(source)
        if result.compiled is None:
            return JSONResponse(
                {"ok": False, "diagnostics": _diagnostics_json(result.diagnostics)},
                status_code=422,
            )
        compiled = result.compiled
        with programs_lock:
            programs[compiled.program_id] = compiled
            programs.move_to_end(compiled.program_id)
            while len(programs) > PROGRAM_CAP:
                programs.popitem(last=False)
        return {
            "ok": True,
            "programId": compiled.program_id,
            "diagnostics": _diagnostics_json(result.diagnostics),
        }

    @app.post("/sessions")
    def create_session(body: dict = Body(...)):
        sessions.sweep()
        pid = body.get("programId")
        if not isinstance(pid, str):
            return _error(400, "Field 'programId' must be a string.")
        with programs_lock:
            compiled = programs.get(pid)
        if compiled is None:
            return _error(404, "Unknown programId.")
        try:
            session = Session(compiled.typed)
            svg = session.view_svg()
        except EvalError as err:
            return JSONResponse(
                {"ok": False, "diagnostics": [err.diagnostic().to_json()]},
                status_code=422,
            )
        sid = uuid.uuid4().hex
        entry = _Entry(session=session, program_id=pid, created=time.time())
        sessions.add(sid, entry)
        return {
            "sessionId": sid,
            "programId": pid,
            "created": entry.created,
            "eventCount": 0,
            "svg": svg,
            "modelDump": value_to_json(session.model),
        }

    @app.post("/sessions/{sid}/events")
    def post_event(sid: str, body: dict = Body(...)):
        sessions.sweep()
        entry = sessions.get(sid)
        if entry is None:
            return _error(404, "Unknown sessionId.")
        event = body.get("event", body)
        if not isinstance(event, dict) or "type" not in event:
            return _error(400, "Body must be an event object with a 'type' field.")
        with entry.lock:
            try:
                step = entry.session.handle_event(event)
            except ValueError as err:
                return _error(400, str(err))
            try:
                svg: str | None = entry.session.view_svg()
                view_error = None
            except EvalError as err:
                svg = None
                view_error = err.message
            payload = {
                "firedMessages": step["fired"],
                "svg": svg,
                "modelDump": value_to_json(entry.session.model),
                "elapsed": entry.session.elapsed,
                "eventCount": len(entry.session.steps),
            }
            if step.get("error") is not None:
                payload["error"] = step["error"]
            elif view_error is not None:
                payload["error"] = view_error
            return payload

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        sessions.sweep()
        entry = sessions.get(sid)
        if entry is None:
            return _error(404, "Unknown sessionId.")
        with entry.lock:
            try:
                svg: str | None = entry.session.view_svg()
            except EvalError:
                svg = None
            return {
                "sessionId": sid,
                "programId": entry.program_id,
                "created": entry.created,
                "svg": svg,
                "modelDump": value_to_json(entry.session.model),
                "elapsed": entry.session.elapsed,
                "eventCount": len(entry.session.steps),
            }

    @app.delete("/sessions/{sid}")
    def delete_session(sid: str):
        if not sessions.remove(sid):
            return _error(404, "Unknown sessionId.")
        return {"deleted": True}

    return app

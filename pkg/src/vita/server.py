"""HTTP + WebSocket service exposing sessions to clients.

Endpoints::

    POST /sessions                       multipart CSV upload or {"path": ...}
    POST /sessions/{id}/apply            {"source": "json"|"command", "payload": ...}
    GET  /sessions/{id}/table?offset&limit
    GET  /sessions/{id}/viz
    GET  /sessions/{id}/history
    GET  /sessions/{id}/operators
    POST /sessions/{id}/checkout         {"version_id": n}
    POST /sessions/{id}/clear            {"view"?: id}
    WS   /sessions/{id}/events           streams effect messages per propagate

One process, sessions isolated by id, no auth: a desk-scale tool. Errors
come back as a structured envelope carrying the original parser/compiler/
engine error; a failed operation never crashes a session or moves its head.
"""

from __future__ import annotations

import asyncio
import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import (
    CompileError,
    EngineError,
    FrameError,
    LoadError,
    OperatorSchemaError,
    OperatorSyntaxError,
    RangeError,
    StorageError,
    UnknownSessionError,
    UnknownVersionError,
    VitaError,
)
from .nodes import OperatorNode
from .session import Session

_STATUS = [
    (UnknownSessionError, 404),
    (UnknownVersionError, 404),
    (RangeError, 400),
    (StorageError, 500),
    (OperatorSyntaxError, 422),
    (OperatorSchemaError, 422),
    (CompileError, 422),
    (EngineError, 422),
    (LoadError, 422),
    (FrameError, 422),
    (VitaError, 422),
]


def error_envelope(exc: VitaError) -> dict:
    entry = {"type": type(exc).__name__.removesuffix("Error"), "message": str(exc)}
    for attr in ("position", "path", "line", "expected"):
        value = getattr(exc, attr, None)
        if value is not None:
            entry[attr] = list(value) if isinstance(value, tuple) else value
    return {"error": entry}


def _status_of(exc: VitaError) -> int:
    for cls, code in _STATUS:
        if isinstance(exc, cls):
            return code
    return 422


class EventHub:
    """Fans effect messages out to WebSocket subscribers, per session."""

    def __init__(self):
        self._subscribers: dict[str, list[tuple[asyncio.AbstractEventLoop, asyncio.Queue]]] = {}
        self._lock = threading.Lock()

    def subscribe(self, session_id: str) -> asyncio.Queue:
        queue: asyncio.Queue = asyncio.Queue()
        with self._lock:
            self._subscribers.setdefault(session_id, []).append(
                (asyncio.get_running_loop(), queue)
            )
        return queue

    def unsubscribe(self, session_id: str, queue: asyncio.Queue) -> None:
        with self._lock:
            subs = self._subscribers.get(session_id, [])
            self._subscribers[session_id] = [s for s in subs if s[1] is not queue]

    def publish(self, session_id: str, messages: list[dict]) -> None:
        with self._lock:
            subs = list(self._subscribers.get(session_id, []))
        for loop, queue in subs:
            for msg in messages:
                loop.call_soon_threadsafe(queue.put_nowait, msg)


def create_app(session_root: str | Path | None = None) -> FastAPI:
    root = Path(session_root) if session_root else Path(".vita-sessions")
    app = FastAPI(title="vita", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, Session] = {}
    hub = EventHub()
    app.state.sessions = sessions

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise UnknownSessionError(f"no session named {session_id!r}")
        return session

    @app.exception_handler(VitaError)
    async def handle_vita_error(_request, exc: VitaError):
        return JSONResponse(status_code=_status_of(exc), content=error_envelope(exc))

    @app.post("/sessions")
    async def create_session(request: Request):
        content_type = request.headers.get("content-type", "")
        text_columns: tuple[str, ...] = ()
        delimiter = ","
        csv_bytes = None
        csv_path = None
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                raise LoadError("multipart upload requires a 'file' field")
            csv_bytes = await upload.read()
            if form.get("text_columns"):
                text_columns = tuple(
                    c.strip() for c in str(form["text_columns"]).split(",") if c.strip()
                )
            if form.get("delimiter"):
                delimiter = str(form["delimiter"])
        else:
            body = await request.json()
            csv_path = body.get("path")
            if csv_path is None:
                raise LoadError("JSON body requires a 'path' field")
            text_columns = tuple(body.get("text_columns", ()))
            delimiter = body.get("delimiter", ",")

        def build() -> Session:
            session_id = _fresh_id(sessions)
            session = Session.create(
                root / session_id,
                csv_path=csv_path,
                csv_bytes=csv_bytes,
                text_columns=text_columns,
                delimiter=delimiter,
                session_id=session_id,
            )
            sessions[session.session_id] = session
            return session

        session = await asyncio.to_thread(build)
        return {
            "session_id": session.session_id,
            "version_id": session.head,
            "table": session.table_page(),
        }

    @app.post("/sessions/{session_id}/apply")
    async def apply_op(session_id: str, request: Request):
        session = get_session(session_id)
        body = await request.json()
        source = body.get("source", "command")
        payload = body.get("payload")
        result = await asyncio.to_thread(session.apply, source, payload)
        if result.effects:
            hub.publish(session_id, result.effects)
        return result.to_dict()

    @app.get("/sessions/{session_id}/table")
    def get_table(session_id: str, offset: int = 0, limit: int = 50):
        page = get_session(session_id).table_page(offset, limit)
        data = json.dumps(page, sort_keys=True, separators=(",", ":")).encode()
        return Response(content=data, media_type="application/json")

    @app.get("/sessions/{session_id}/viz")
    def get_viz(session_id: str):
        return get_session(session_id).viz_list()

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        return {"nodes": get_session(session_id).history()}

    @app.get("/sessions/{session_id}/operators")
    def get_operators(session_id: str):
        return {"operators": list(get_session(session_id).operator_names())}

    @app.post("/sessions/{session_id}/checkout")
    async def post_checkout(session_id: str, request: Request):
        session = get_session(session_id)
        body = await request.json()
        node = OperatorNode(kind="checkout", params={"version": int(body["version_id"])})
        result = await asyncio.to_thread(session.apply_node, node)
        return result.to_dict()

    @app.post("/sessions/{session_id}/clear")
    async def post_clear(session_id: str, request: Request):
        session = get_session(session_id)
        body = await request.json() if await request.body() else {}
        node = OperatorNode(kind="clear", view=body.get("view"))
        result = await asyncio.to_thread(session.apply_node, node)
        if result.effects:
            hub.publish(session_id, result.effects)
        return result.to_dict()

    @app.websocket("/sessions/{session_id}/events")
    async def events(websocket: WebSocket, session_id: str):
        await websocket.accept()
        if session_id not in sessions:
            await websocket.close(code=4404)
            return
        queue = hub.subscribe(session_id)
        try:
            while True:
                message = await queue.get()
                await websocket.send_json(message)
        except WebSocketDisconnect:
            pass
        finally:
            hub.unsubscribe(session_id, queue)

    return app


def _fresh_id(sessions: dict) -> str:
    n = len(sessions) + 1
    while f"s{n}" in sessions:
        n += 1
    return f"s{n}"

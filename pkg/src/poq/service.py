"""HTTP/JSON API for the query console and other clients.

Logs live in memory only; uploading returns a server-assigned id that later
requests reference.  Uploads take the store lock, queries read immutable
snapshots, so a query never observes a partially ingested log.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import payloads
from .evaluator import Mode
from .ingest import CsvColumns, IngestError, ingest_csv, ingest_xes
from .model import EventLog
from .parser import ParseError

DEFAULT_BODY_CAP = 64 * 1024 * 1024


class LogStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._logs: dict[str, tuple[EventLog, str]] = {}
        self._counter = 0

    def add(self, log: EventLog, name: str) -> tuple[str, EventLog]:
        with self._lock:
            self._counter += 1
            log_id = f"log-{self._counter}"
            stored = EventLog(
                log_id=log_id, traces=log.traces, dropped_starts=log.dropped_starts
            )
            self._logs[log_id] = (stored, name)
            return log_id, stored

    def get(self, log_id: str) -> tuple[EventLog, str] | None:
        with self._lock:
            return self._logs.get(log_id)


class ParseRequest(BaseModel):
    text: str


class QueryRequest(BaseModel):
    text: str
    mode: str = "short"


def _json(payload: object, status: int = 200) -> Response:
    return Response(
        content=payloads.dumps(payload),
        status_code=status,
        media_type="application/json",
    )


def _error(status: int, code: str, message: str, position: dict | None = None) -> Response:
    body: dict = {"error": {"code": code, "message": message}}
    if position is not None:
        body["error"]["position"] = position
    return _json(body, status=status)


def ingest_named(data: bytes, fmt: str, name: str) -> EventLog:
    if fmt == "csv":
        return ingest_csv(data, CsvColumns(), log_id=name)
    if fmt == "xes":
        return ingest_xes(data, log_id=name)
    raise ValueError(fmt)


def guess_format(name: str) -> str | None:
    lowered = name.lower()
    if lowered.endswith(".csv"):
        return "csv"
    if lowered.endswith((".xes", ".xes.gz")):
        return "xes"
    return None


def create_app(
    store: LogStore | None = None,
    max_body_bytes: int = DEFAULT_BODY_CAP,
    console_dir: Path | None = None,
) -> FastAPI:
    app = FastAPI(title="poq", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    logs = store if store is not None else LogStore()
    app.state.store = logs

    @app.post("/logs")
    async def upload_log(request: Request) -> Response:
        fmt = request.query_params.get("format")
        name = request.query_params.get("name", "upload")
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None or isinstance(upload, str):
                return _error(422, "no_file", "multipart upload needs a 'file' part")
            data = await upload.read()
            if upload.filename:
                name = request.query_params.get("name", upload.filename)
                fmt = fmt or guess_format(upload.filename)
        else:
            data = await request.body()
            fmt = fmt or guess_format(name)
        if len(data) > max_body_bytes:
            return _error(
                413, "too_large", f"body exceeds the {max_body_bytes} byte cap"
            )
        if not data:
            return _error(422, "empty_body", "no event data in request body")
        if fmt not in ("csv", "xes"):
            return _error(
                400, "unknown_format", f"format must be 'csv' or 'xes', got {fmt!r}"
            )
        try:
            parsed = ingest_named(data, fmt, name)
        except IngestError as exc:
            return _error(422, "ingest_failed", str(exc))
        log_id, stored = logs.add(parsed, name)
        return _json(payloads.session_log_payload(stored, name))

    @app.post("/query/parse")
    async def parse_query(body: ParseRequest) -> Response:
        return _json(payloads.parse_payload(body.text))

    @app.post("/logs/{log_id}/query")
    async def run_query(log_id: str, body: QueryRequest) -> Response:
        entry = logs.get(log_id)
        if entry is None:
            return _error(404, "unknown_log", f"no log with id {log_id!r}")
        if body.mode not in ("short", "full"):
            return _error(400, "bad_mode", "mode must be 'short' or 'full'")
        mode = Mode.SHORT_CIRCUIT if body.mode == "short" else Mode.FULL
        try:
            payload = payloads.query_payload(entry[0], body.text, mode)
        except ParseError as exc:
            return _error(422, "parse_error", exc.message, position=exc.to_json())
        return _json(payload)

    @app.get("/logs/{log_id}/variants")
    async def list_variants(log_id: str) -> Response:
        entry = logs.get(log_id)
        if entry is None:
            return _error(404, "unknown_log", f"no log with id {log_id!r}")
        return _json(payloads.variants_payload(entry[0]))

    if console_dir is not None and console_dir.is_dir():
        app.mount("/", StaticFiles(directory=console_dir, html=True), name="console")

    return app

"""Screening HTTP service: capture sessions, serve features and predictions.

JSON-over-HTTP/1.1 on the stdlib server; no external dependencies. The
session store is a directory of session files keyed by a content-hash id,
written atomically (temp file + rename), so concurrent requests are safe:
the bundle is read-only after load and every response is recomputed from
the stored bytes. CORS is open for the capture webapp.

    POST /api/v1/sessions                 -> 201 {"id": ...}
    GET  /api/v1/sessions/{id}/features   -> 200 {columns, values, missing_mask}
    GET  /api/v1/sessions/{id}/screening  -> 200 screening report (503 without a bundle)
    GET  /api/v1/tasks                    -> 200 task definitions
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import numpy as np

from .bundle import TrainedBundle, bundle_predict, load_bundle
from .errors import InkError
from .features.extract import extract_session_features, extract_task_features
from .features.registry import SESSION_COLUMNS
from .strokes import DIAGNOSES, TASKS, DrawingSession, parse_session
from .tasks import task_definitions

MAX_BODY_BYTES = 16 * 1024 * 1024
SCHEMA_VERSION = 1

_ID_RE = re.compile(r"^[0-9a-f]{16}$")
_STATIC_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class SessionStore:
    """File-backed store; session id is a content-hash prefix."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def put(self, body: bytes) -> str:
        sid = hashlib.sha256(body).hexdigest()[:16]
        final = self.root / f"{sid}.json"
        if not final.exists():
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(body)
                os.replace(tmp, final)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return sid

    def get(self, sid: str) -> bytes | None:
        if not _ID_RE.match(sid):
            return None
        path = self.root / f"{sid}.json"
        if not path.exists():
            return None
        return path.read_bytes()


def _task_highlights(session: DrawingSession, window: int) -> dict:
    highlights = {}
    for task in TASKS:
        rec = session.recordings.get(task)
        if rec is None:
            highlights[task] = None
            continue
        tf = extract_task_features(rec, window)
        highlights[task] = {
            name: (None if tf.is_missing(name) else tf.value(name))
            for name in ("speed_median", "pause_mean", "pressure_median")
        }
    return highlights


class ScreeningApp:
    """Request-independent state: store, bundle, task definitions."""

    def __init__(self, store_dir: str | Path, bundle: TrainedBundle | None = None,
                 webapp_dir: str | Path | None = None, smoothing_window: int = 5):
        self.store = SessionStore(store_dir)
        self.bundle = bundle
        self.webapp_dir = Path(webapp_dir) if webapp_dir else None
        self.window = smoothing_window
        self.tasks_payload = task_definitions()

    # -- route handlers return (status, payload-dict) -------------------------

    def post_session(self, body: bytes) -> tuple[int, dict]:
        try:
            parse_session(body)
        except InkError as exc:
            return 400, {"error": type(exc).__name__, "detail": str(exc)}
        sid = self.store.put(body)
        return 201, {"schema_version": SCHEMA_VERSION, "id": sid}

    def get_features(self, sid: str) -> tuple[int, dict]:
        body = self.store.get(sid)
        if body is None:
            return 404, {"error": "unknown session id"}
        vec = extract_session_features(parse_session(body), self.window)
        return 200, {
            "schema_version": SCHEMA_VERSION,
            "columns": list(SESSION_COLUMNS),
            "values": [None if m else float(v) for v, m in zip(vec.values, vec.missing)],
            "missing_mask": [bool(m) for m in vec.missing],
        }

    def get_screening(self, sid: str) -> tuple[int, dict]:
        body = self.store.get(sid)
        if body is None:
            return 404, {"error": "unknown session id"}
        if self.bundle is None:
            return 503, {"error": "no model loaded"}
        session = parse_session(body)
        vec = extract_session_features(session, self.window)
        preds = bundle_predict(self.bundle, vec.values[None, :])
        probs = None
        if preds["probabilities"] is not None:
            probs = {
                name: float(preds["probabilities"][0, k]) for k, name in enumerate(DIAGNOSES)
            }
        return 200, {
            "schema_version": SCHEMA_VERSION,
            "session_id": session.session_id,
            "probabilities": probs,
            "mmse": None if preds["mmse"] is None else float(preds["mmse"][0]),
            "mtl_atrophy_z": None if preds["mtl"] is None else float(preds["mtl"][0]),
            "task_highlights": _task_highlights(session, self.window),
            "disclaimer": "research demonstration, not a diagnostic device",
        }

    def get_tasks(self) -> tuple[int, dict]:
        return 200, self.tasks_payload


class _Handler(BaseHTTPRequestHandler):
    app: ScreeningApp  # injected via make_handler

    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_POST(self):
        if self.path != "/api/v1/sessions":
            self._send_json(404, {"error": "not found"})
            return
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY_BYTES:
            self._send_json(413, {"error": "payload too large"})
            return
        body = self.rfile.read(length)
        status, payload = self.app.post_session(body)
        self._send_json(status, payload)

    def do_GET(self):
        m = re.match(r"^/api/v1/sessions/([^/]+)/features$", self.path)
        if m:
            status, payload = self.app.get_features(m.group(1))
            self._send_json(status, payload)
            return
        m = re.match(r"^/api/v1/sessions/([^/]+)/screening$", self.path)
        if m:
            status, payload = self.app.get_screening(m.group(1))
            self._send_json(status, payload)
            return
        if self.path == "/api/v1/tasks":
            status, payload = self.app.get_tasks()
            self._send_json(status, payload)
            return
        if self.app.webapp_dir is not None and not self.path.startswith("/api/"):
            self._send_static()
            return
        self._send_json(404, {"error": "not found"})

    def _send_static(self):
        rel = self.path.lstrip("/") or "index.html"
        target = (self.app.webapp_dir / rel).resolve()
        if not str(target).startswith(str(self.app.webapp_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not found"})
            return
        data = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _STATIC_TYPES.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(data)))
        self._cors()
        self.end_headers()
        self.wfile.write(data)


def make_server(host: str, port: int, app: ScreeningApp) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"app": app})
    return ThreadingHTTPServer((host, port), handler)


def start_background(app: ScreeningApp, host: str = "127.0.0.1", port: int = 0):
    """Start a server thread; returns (server, base_url). Used by tests."""
    server = make_server(host, port, app)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, f"http://{host}:{server.server_address[1]}"


def run_service(host: str, port: int, bundle_path: str | None,
                store_dir: str, webapp_dir: str | None = None,
                smoothing_window: int = 5) -> None:
    bundle = load_bundle(bundle_path) if bundle_path else None
    app = ScreeningApp(store_dir, bundle, webapp_dir, smoothing_window)
    server = make_server(host, port, app)
    loaded = "with bundle" if bundle else "WITHOUT a bundle (screening disabled)"
    print(f"inkscreen service on http://{host}:{server.server_address[1]} {loaded}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()

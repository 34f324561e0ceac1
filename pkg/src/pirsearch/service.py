"""HTTP facade over the engine.

Thin by design: request bodies are the same bi-list / annotation JSON
documents the library uses, responses are the engine's results verbatim,
and every engine error maps onto exactly one status code. The process
also serves a static UI bundle from / when one is configured.

Endpoints:
    POST /api/images                  insert an annotation, 201 {"id"}
    POST /api/query/sketch            ranked results for a sketch query
    POST /api/query/by-image          ranked results seeded by a record
    GET  /api/images?sample=n         random browse sample
    GET  /api/images/{id}             one record with its bi-list
    GET  /api/thumbnails/{id}.png     iconic PNG
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .bilist import SketchQuery, bilist_from_dict, bilist_to_dict
from .engine import Engine, annotation_from_dict
from .errors import ConflictError, ParseError, PirError, ValidationError
from .similarity import ScoredResult

_STATUS_BY_CODE = {
    "validation": 400,
    "parse": 400,
    "degenerate-geometry": 400,
    "degenerate-region": 400,
    "insufficient-data": 400,
    "alignment": 400,
    "configuration": 400,
    "unknown-name": 400,
    "not-found": 404,
    "conflict": 409,
}

_MIME = {
    ".html": "text/html; charset=utf-8",
    ".js": "application/javascript",
    ".css": "text/css",
    ".png": "image/png",
    ".svg": "image/svg+xml",
    ".ico": "image/x-icon",
    ".map": "application/json",
}


def _result_payload(results: list[ScoredResult]) -> list[dict]:
    return [
        {
            "id": r.image_id,
            "similarity": r.similarity,
            "matched": list(r.matched),
            "thumbnail_url": f"/api/thumbnails/{r.image_id}.png",
        }
        for r in results
    ]


def _parse_query_controls(doc: dict) -> tuple[int, bool, int]:
    threshold = doc.get("threshold", 0)
    if isinstance(threshold, bool) or not isinstance(threshold, int):
        raise ValidationError(f"threshold must be an integer, got {threshold!r}")
    invariant = bool(doc.get("invariant", False))
    limit = doc.get("limit", 50)
    if isinstance(limit, bool) or not isinstance(limit, int) or limit < 1:
        raise ValidationError(f"limit must be a positive integer, got {limit!r}")
    return threshold, invariant, limit


class ApiHandler(BaseHTTPRequestHandler):
    server_version = "pirsearch"
    engine: Engine  # set by make_server
    static_dir: Optional[Path] = None

    # --- plumbing ----------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, payload) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_error_payload(self, status: int, code: str, message: str) -> None:
        self._send_json(status, {"error": {"code": code, "message": message}})

    def _send_engine_error(self, exc: PirError) -> None:
        status = _STATUS_BY_CODE.get(exc.code, 500)
        self._send_error_payload(status, exc.code, str(exc))

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length", 0))
        raw = self.rfile.read(length) if length else b""
        try:
            doc = json.loads(raw or b"null")
        except json.JSONDecodeError as exc:
            raise ParseError(f"request body is not valid JSON: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ParseError("request body must be a JSON object")
        return doc

    # --- routing -----------------------------------------------------------

    def do_POST(self):
        try:
            path = urlparse(self.path).path
            if path == "/api/images":
                self._post_image()
            elif path == "/api/query/sketch":
                self._post_sketch()
            elif path == "/api/query/by-image":
                self._post_by_image()
            else:
                self._send_error_payload(404, "not-found", f"no such endpoint: {path}")
        except PirError as exc:
            self._send_engine_error(exc)
        except Exception as exc:  # never leak a traceback
            self._send_error_payload(500, "internal", f"{type(exc).__name__}")

    def do_GET(self):
        try:
            parsed = urlparse(self.path)
            path = parsed.path
            if path == "/api/images":
                self._get_images(parse_qs(parsed.query))
            elif path.startswith("/api/images/"):
                self._get_image(path.removeprefix("/api/images/"))
            elif path.startswith("/api/thumbnails/") and path.endswith(".png"):
                record_id = path.removeprefix("/api/thumbnails/").removesuffix(".png")
                self._get_thumbnail(record_id)
            else:
                self._serve_static(path)
        except PirError as exc:
            self._send_engine_error(exc)
        except Exception as exc:
            self._send_error_payload(500, "internal", f"{type(exc).__name__}")

    # --- handlers ----------------------------------------------------------

    def _post_image(self):
        doc = self._read_body()
        annotation = annotation_from_dict(doc)
        if annotation.record_id is not None and annotation.record_id in self.engine.catalog.records:
            raise ConflictError(f"record id {annotation.record_id!r} already exists")
        record_id = self.engine.insert_image(annotation)
        self._send_json(201, {"id": record_id})

    def _post_sketch(self):
        doc = self._read_body()
        threshold, invariant, limit = _parse_query_controls(doc)
        bilist = bilist_from_dict({"objects": doc.get("objects"), "relations": doc.get("relations")})
        query = SketchQuery(
            bilist=bilist, threshold=threshold, invariant_mode=invariant, limit=limit
        )
        self._send_json(200, _result_payload(self.engine.query_sketch(query)))

    def _post_by_image(self):
        doc = self._read_body()
        record_id = doc.get("id")
        if not isinstance(record_id, str) or not record_id:
            raise ValidationError("'id' must be a non-empty string")
        threshold, invariant, limit = _parse_query_controls(doc)
        if not (0 <= threshold <= 100):
            raise ValidationError(f"threshold must lie in [0, 100], got {threshold}")
        results = self.engine.query_by_image(
            record_id, threshold=threshold, invariant=invariant, limit=limit
        )
        self._send_json(200, _result_payload(results))

    def _get_images(self, params: dict):
        raw = params.get("sample", ["8"])[0]
        try:
            n = int(raw)
        except ValueError:
            raise ValidationError(f"sample must be an integer, got {raw!r}") from None
        if n < 0:
            raise ValidationError(f"sample must be >= 0, got {n}")
        records = self.engine.random_sample(n)
        self._send_json(
            200,
            [
                {"id": r.id, "thumbnail_url": f"/api/thumbnails/{r.id}.png"}
                for r in records
            ],
        )

    def _get_image(self, record_id: str):
        record = self.engine.catalog.get(record_id)
        self._send_json(
            200,
            {
                "id": record.id,
                "original_url": record.original_url,
                "inserted_at": record.inserted_at,
                "thumbnail_url": f"/api/thumbnails/{record.id}.png",
                "bilist": bilist_to_dict(record.bilist),
            },
        )

    def _get_thumbnail(self, record_id: str):
        png = self.engine.thumbnail_png(record_id)
        self.send_response(200)
        self.send_header("Content-Type", "image/png")
        self.send_header("Content-Length", str(len(png)))
        self.end_headers()
        self.wfile.write(png)

    def _serve_static(self, path: str):
        if self.static_dir is None:
            self._send_error_payload(404, "not-found", f"no such endpoint: {path}")
            return
        rel = path.lstrip("/") or "index.html"
        target = (self.static_dir / rel).resolve()
        if not str(target).startswith(str(self.static_dir.resolve())) or not target.is_file():
            # single-page fallback keeps client-side routes working
            target = self.static_dir / "index.html"
            if not target.is_file():
                self._send_error_payload(404, "not-found", f"no such file: {path}")
                return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", _MIME.get(target.suffix, "application/octet-stream"))
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(
    engine: Engine,
    host: str = "127.0.0.1",
    port: int = 8765,
    static_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Bind a threaded HTTP server around the engine; caller runs it."""
    handler = type(
        "BoundApiHandler",
        (ApiHandler,),
        {
            "engine": engine,
            "static_dir": Path(static_dir) if static_dir is not None else None,
        },
    )
    return ThreadingHTTPServer((host, port), handler)


def serve_forever(server: ThreadingHTTPServer) -> None:
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def start_background(server: ThreadingHTTPServer) -> threading.Thread:
    """Run the server on a daemon thread; used by tests and demos."""
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread

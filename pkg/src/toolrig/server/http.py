"""HTTP/1.1 transport for the context service.

POST /mcp/call        execute a tool, optionally persisting the artifact
POST /mcp-server/mcp  projection query over persisted steps
POST /mcp/trace       export a problem's artifacts in creation order
POST /mcp/reset       drop a run/problem namespace
GET  /mcp/tools       registry descriptors

The two primary paths are kept exactly as the wire fixtures use them, even
though they are asymmetric.  All responses are canonical JSON.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..jsonutil import canonical_bytes
from .service import ContextService

_MAX_BODY = 8 * 1024 * 1024


class _Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "toolrig-mcp/0.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass  # keep test output clean; operators can front with any proxy they like

    @property
    def service(self) -> ContextService:
        return self.server.service  # type: ignore[attr-defined]

    def _send(self, status: int, payload) -> None:
        body = canonical_bytes(payload)
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _read_body(self):
        length = int(self.headers.get("Content-Length", 0))
        if length > _MAX_BODY:
            return None, (413, {"ok": False, "error": {"code": "too_large", "message": "body too large"}})
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return None, (400, {"ok": False, "error": {"code": "bad_request", "message": "empty body"}})
        try:
            return json.loads(raw), None
        except json.JSONDecodeError as err:
            return None, (400, {"ok": False, "error": {"code": "bad_json", "message": str(err)}})

    def do_POST(self):
        body, failure = self._read_body()
        if failure is not None:
            self._send(*failure)
            return
        if self.path == "/mcp/call":
            self._send(*self.service.call(body))
        elif self.path == "/mcp-server/mcp":
            self._send(*self.service.query(body))
        elif self.path == "/mcp/trace":
            self._send(*self.service.trace(body))
        elif self.path == "/mcp/reset":
            self._send(*self.service.reset(body))
        else:
            self._send(404, {"ok": False, "error": {"code": "not_found", "message": self.path}})

    def do_GET(self):
        if self.path == "/mcp/tools":
            self._send(*self.service.tools())
        else:
            self._send(404, {"ok": False, "error": {"code": "not_found", "message": self.path}})


class ContextServer:
    """Owns a ThreadingHTTPServer plus its worker thread."""

    def __init__(self, service: ContextService, host: str = "127.0.0.1", port: int = 0):
        self.httpd = ThreadingHTTPServer((host, port), _Handler)
        self.httpd.service = service  # type: ignore[attr-defined]
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self.httpd.server_address[0], self.httpd.server_address[1]

    @property
    def base_url(self) -> str:
        host, port = self.address
        return f"http://{host}:{port}"

    def start(self) -> None:
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()

    def serve_forever(self) -> None:
        self.httpd.serve_forever()

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None

"""REST service exposing tokenization, tagging and dictionary rescoring.

Endpoints:
    GET  /api/models   -> {"models": {name: ["tokenizer", "tagger"]},
                           "default_model": name}
    POST /api/process  -> {"model": name, "result": "<CoNLL-U>"}

/api/process accepts an application/x-www-form-urlencoded body with fields
`data` (required), `model`, `tokenizer`, `tagger`, `dictionary` (default on),
`input` (text | conllu) and `output` (conllu). Errors come back as JSON
{"error": ...} with status 400 (bad request), 404 (unknown model) or 413
(body over the size limit).

Handlers are stateless over an immutable model + dictionary, so concurrent
identical requests return identical bytes. One JSON access-log line is
emitted per request.
"""

import json
import logging
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional
from urllib.parse import parse_qs

from .conllu import parse_conllu, tokenize, write_conllu
from .errors import DictagError
from .morphdict import MorphDict
from .pipeline import annotate
from .tagger import TaggerModel

log = logging.getLogger("dictag.service")

_TRUE = {"", "1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}

DEFAULT_SIZE_LIMIT = 1 << 20


@dataclass
class ServiceConfig:
    model: TaggerModel
    model_name: str = "default"
    mdict: Optional[MorphDict] = None
    size_limit: int = DEFAULT_SIZE_LIMIT
    workers: int = 8

    def __post_init__(self):
        if self.model is None:
            raise ValueError("service cannot start without a model")
        if self.size_limit < 1:
            raise ValueError("size limit must be positive")
        if self.workers < 1:
            raise ValueError("worker count must be positive")


class _HTTPError(Exception):
    def __init__(self, status, message):
        super().__init__(message)
        self.status = status
        self.message = message


def _flag(params, name, default):
    if name not in params:
        return default
    value = params[name][-1].strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise _HTTPError(400, f"bad boolean value for {name!r}: {value!r}")


def _single(params, name, default):
    if name not in params:
        return default
    return params[name][-1]


def process_request(config: ServiceConfig, params: dict) -> dict:
    """Pure request handler: form parameters in, response payload out."""
    if "data" not in params:
        raise _HTTPError(400, "missing required field 'data'")
    data = params["data"][-1]

    model_name = _single(params, "model", config.model_name)
    if model_name != config.model_name:
        raise _HTTPError(404, f"unknown model {model_name!r}")

    input_format = _single(params, "input", "text")
    if input_format not in ("text", "conllu"):
        raise _HTTPError(400, f"unsupported input format {input_format!r}")
    output_format = _single(params, "output", "conllu")
    if output_format != "conllu":
        raise _HTTPError(400, f"unsupported output format {output_format!r}")

    run_tokenizer = _flag(params, "tokenizer", input_format == "text")
    run_tagger = _flag(params, "tagger", True)
    use_dictionary = _flag(params, "dictionary", True)

    if input_format == "text":
        if not run_tokenizer:
            raise _HTTPError(400, "text input requires the tokenizer")
        sentences = tokenize(data)
    else:
        try:
            sentences = parse_conllu(data)
        except DictagError as exc:
            raise _HTTPError(400, f"cannot parse CoNLL-U input: {exc}")

    if run_tagger:
        mdict = config.mdict if use_dictionary else None
        sentences = annotate(config.model, sentences, mdict=mdict)

    return {"model": config.model_name, "result": write_conllu(sentences)}


def models_payload(config: ServiceConfig) -> dict:
    return {
        "models": {config.model_name: ["tokenizer", "tagger"]},
        "default_model": config.model_name,
    }


def _make_handler(config: ServiceConfig):
    gate = threading.BoundedSemaphore(config.workers)

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "dictag"

        def _send(self, status, payload):
            body = json.dumps(payload, ensure_ascii=False).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)
            return status, len(body)

        def _log_access(self, status, bytes_in, started):
            log.info(
                "%s",
                json.dumps(
                    {
                        "method": self.command,
                        "path": self.path,
                        "status": status,
                        "bytes_in": bytes_in,
                        "duration_ms": round(
                            (time.perf_counter() - started) * 1000, 3
                        ),
                    },
                    ensure_ascii=False,
                ),
            )

        def do_GET(self):
            started = time.perf_counter()
            if self.path.split("?")[0] == "/api/models":
                status, _ = self._send(200, models_payload(config))
            else:
                status, _ = self._send(404, {"error": "no such endpoint"})
            self._log_access(status, 0, started)

        def do_POST(self):
            started = time.perf_counter()
            if self.path.split("?")[0] != "/api/process":
                status, _ = self._send(404, {"error": "no such endpoint"})
                self._log_access(status, 0, started)
                return
            try:
                length = int(self.headers.get("Content-Length", ""))
            except ValueError:
                self.close_connection = True
                status, _ = self._send(400, {"error": "missing Content-Length"})
                self._log_access(status, 0, started)
                return
            if length > config.size_limit:
                self.close_connection = True
                status, _ = self._send(
                    413,
                    {"error": f"request body over the {config.size_limit} byte limit"},
                )
                self._log_access(status, length, started)
                return
            raw = self.rfile.read(length)
            try:
                params = parse_qs(
                    raw.decode("utf-8"), keep_blank_values=True, strict_parsing=False
                )
            except UnicodeDecodeError:
                params = None
            with gate:
                if params is None:
                    status, _ = self._send(400, {"error": "body is not UTF-8"})
                else:
                    try:
                        payload = process_request(config, params)
                        status, _ = self._send(200, payload)
                    except _HTTPError as exc:
                        status, _ = self._send(exc.status, {"error": exc.message})
                    except DictagError as exc:
                        status, _ = self._send(400, {"error": str(exc)})
            self._log_access(status, length, started)

        def log_message(self, fmt, *args):
            pass  # replaced by the JSON access log

    return Handler


class MorphService:
    """Threaded HTTP server wrapper with graceful shutdown."""

    def __init__(self, config: ServiceConfig, host="127.0.0.1", port=0):
        self._server = ThreadingHTTPServer((host, port), _make_handler(config))
        self._server.daemon_threads = False
        self._thread = None

    @property
    def host(self) -> str:
        return self._server.server_address[0]

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def start(self):
        """Run in a background thread (used by tests and embedding code)."""
        self._thread = threading.Thread(
            target=self._server.serve_forever, name="dictag-service", daemon=True
        )
        self._thread.start()
        return self

    def serve_forever(self):
        self._server.serve_forever()

    def shutdown(self):
        """Stop accepting and drain in-flight requests."""
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join()
            self._thread = None

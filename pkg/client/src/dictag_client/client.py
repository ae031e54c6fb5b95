"""Synchronous client for the dictag HTTP service.

Deliberately thin: form-encoded requests over urllib, typed errors, and a
minimal CoNLL-U token parser. Transport failures and 5xx responses are
retried with exponential backoff; 4xx responses are the caller's mistake and
surface immediately.

The service base URL comes from the `base_url` argument or the DICTAG_URL
environment variable.
"""

import json
import os
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass, field
from typing import Optional

ENV_BASE_URL = "DICTAG_URL"


class ClientError(Exception):
    """Base class for everything this client raises."""


class RequestError(ClientError):
    """The service rejected the request (HTTP 4xx); not retried."""

    def __init__(self, status, message):
        super().__init__(f"HTTP {status}: {message}")
        self.status = status
        self.message = message


class ServerError(ClientError):
    """The service failed (HTTP 5xx) even after retries."""

    def __init__(self, status, message):
        super().__init__(f"HTTP {status}: {message}")
        self.status = status
        self.message = message


class TransportError(ClientError):
    """The service could not be reached even after retries."""


class ResponseParseError(ClientError):
    """The service answered with something unexpected."""


@dataclass(frozen=True)
class TokenRecord:
    id: int
    form: str
    lemma: Optional[str] = None
    xpos: Optional[str] = None


@dataclass(frozen=True)
class SentenceRecord:
    tokens: tuple = ()

    def forms(self):
        return [t.form for t in self.tokens]


def _parse_result_conllu(text: str):
    """Extract (id, form, lemma, xpos) token records from CoNLL-U text."""
    sentences = []
    tokens = []
    for line in text.splitlines():
        if not line.strip():
            if tokens:
                sentences.append(SentenceRecord(tuple(tokens)))
                tokens = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ResponseParseError(
                f"expected 10 CoNLL-U columns, got {len(cols)}: {line!r}"
            )
        if "-" in cols[0] or "." in cols[0]:
            continue  # multiword ranges and empty nodes are not token records
        try:
            tid = int(cols[0])
        except ValueError:
            raise ResponseParseError(f"bad token id in {line!r}")
        tokens.append(
            TokenRecord(
                id=tid,
                form=cols[1],
                lemma=None if cols[2] == "_" else cols[2],
                xpos=None if cols[4] == "_" else cols[4],
            )
        )
    if tokens:
        sentences.append(SentenceRecord(tuple(tokens)))
    return sentences


def _flag(value: bool) -> str:
    return "true" if value else "false"


@dataclass
class Client:
    """One service connection's settings. Not shared across threads."""

    base_url: Optional[str] = None
    timeout: float = 30.0
    retries: int = 3  # additional attempts after the first one
    backoff: float = 0.25  # seconds; doubles per retry
    _resolved: str = field(init=False, repr=False, default="")

    def __post_init__(self):
        url = self.base_url or os.environ.get(ENV_BASE_URL, "")
        if not url:
            raise ValueError(
                f"no base URL: pass base_url or set {ENV_BASE_URL}"
            )
        self._resolved = url.rstrip("/")

    # -- HTTP plumbing ------------------------------------------------------

    def _error_message(self, body: bytes) -> str:
        try:
            return json.loads(body.decode("utf-8")).get("error", "")
        except (UnicodeDecodeError, json.JSONDecodeError, AttributeError):
            return body.decode("utf-8", "replace")[:200]

    def _request(self, path: str, form: Optional[dict] = None) -> dict:
        url = self._resolved + path
        data = None
        headers = {}
        if form is not None:
            data = urllib.parse.urlencode(form).encode("utf-8")
            headers["Content-Type"] = "application/x-www-form-urlencoded"
        last_exc = None
        for attempt in range(self.retries + 1):
            if attempt:
                time.sleep(self.backoff * (2 ** (attempt - 1)))
            req = urllib.request.Request(url, data=data, headers=headers)
            try:
                with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                    body = resp.read()
                    break
            except urllib.error.HTTPError as err:
                body = err.read()
                if 400 <= err.code < 500:
                    raise RequestError(err.code, self._error_message(body))
                last_exc = ServerError(err.code, self._error_message(body))
            except (urllib.error.URLError, ConnectionError, TimeoutError) as err:
                last_exc = TransportError(f"cannot reach {url}: {err}")
        else:
            raise last_exc
        try:
            payload = json.loads(body.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise ResponseParseError(f"response is not JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ResponseParseError("response JSON is not an object")
        return payload

    # -- public API ---------------------------------------------------------

    def models(self) -> dict:
        """Capability listing: {"models": {...}, "default_model": name}."""
        return self._request("/api/models")

    def process(
        self,
        data: str,
        model: Optional[str] = None,
        tokenizer: Optional[bool] = None,
        tagger: Optional[bool] = None,
        dictionary: Optional[bool] = None,
        input_format: Optional[str] = None,
    ):
        """Annotate text (or CoNLL-U) and return parsed sentence records."""
        form = {"data": data}
        if model is not None:
            form["model"] = model
        if tokenizer is not None:
            form["tokenizer"] = _flag(tokenizer)
        if tagger is not None:
            form["tagger"] = _flag(tagger)
        if dictionary is not None:
            form["dictionary"] = _flag(dictionary)
        if input_format is not None:
            form["input"] = input_format
        payload = self._request("/api/process", form)
        if "result" not in payload:
            raise ResponseParseError("response carries no 'result' field")
        return _parse_result_conllu(payload["result"])


def process(data: str, base_url: Optional[str] = None, **options):
    """One-shot convenience wrapper around Client.process."""
    return Client(base_url=base_url).process(data, **options)


def models(base_url: Optional[str] = None) -> dict:
    """One-shot convenience wrapper around Client.models."""
    return Client(base_url=base_url).models()

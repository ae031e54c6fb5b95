"""Thin Python client for the dictag morphosyntactic analysis service."""

from .client import (
    ENV_BASE_URL,
    Client,
    ClientError,
    RequestError,
    ResponseParseError,
    SentenceRecord,
    ServerError,
    TokenRecord,
    TransportError,
    models,
    process,
)

__version__ = "0.1.0"

__all__ = [
    "ENV_BASE_URL",
    "Client",
    "ClientError",
    "RequestError",
    "ResponseParseError",
    "SentenceRecord",
    "ServerError",
    "TokenRecord",
    "TransportError",
    "models",
    "process",
]

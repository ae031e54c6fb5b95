"""Kernel backend selection.

The compiled Cython kernels are used when the extension built; otherwise the
pure numpy twins take over. `DICTAG_KERNELS=pure|cython` forces a backend
(useful for the benchmark and for parity tests).
"""

import os

from . import _pykernels

_FORCED = os.environ.get("DICTAG_KERNELS", "").strip().lower()

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

if _FORCED == "pure":
    _impl = _pykernels
elif _FORCED == "cython":
    if _ckernels is None:
        raise ImportError(
            "DICTAG_KERNELS=cython but the compiled extension is not available"
        )
    _impl = _ckernels
else:
    _impl = _ckernels if _ckernels is not None else _pykernels

BACKEND = _impl.BACKEND

lcs = _impl.lcs
score_rows = _impl.score_rows
perceptron_update = _impl.perceptron_update
finalize_totals = _impl.finalize_totals


def available_backends():
    """Names of the kernel backends importable in this environment."""
    names = ["pure"]
    if _ckernels is not None:
        names.append("cython")
    return names


def get_backend(name):
    """Return the kernel module for `name` ("pure" or "cython")."""
    if name == "pure":
        return _pykernels
    if name == "cython":
        if _ckernels is None:
            raise ValueError("cython kernels are not built")
        return _ckernels
    raise ValueError(f"unknown kernel backend: {name!r}")


def set_backend(name):
    """Rebind the module-level kernel functions. Not thread-safe; meant for
    the benchmark and for backend parity tests."""
    global _impl, BACKEND, lcs, score_rows, perceptron_update, finalize_totals
    _impl = get_backend(name)
    BACKEND = _impl.BACKEND
    lcs = _impl.lcs
    score_rows = _impl.score_rows
    perceptron_update = _impl.perceptron_update
    finalize_totals = _impl.finalize_totals


class backend:
    """Context manager: run a block under a specific kernel backend."""

    def __init__(self, name):
        self._name = name
        self._saved = None

    def __enter__(self):
        self._saved = BACKEND
        set_backend(self._name)
        return _impl

    def __exit__(self, *exc):
        set_backend(self._saved)
        return False

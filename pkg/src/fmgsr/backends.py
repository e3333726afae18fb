"""Kernel backend selection.

Two interchangeable lanes implement the hot smoother loops: a numba-compiled
one (default when numba imports) and a pure-numpy fallback.  The environment
variable ``FMGSR_BACKEND`` (``numba`` or ``numpy``) picks the lane at import
time; ``set_backend`` switches it at runtime.  Both lanes return bit-identical
results.
"""

from __future__ import annotations

import logging
import os
from types import ModuleType

from . import _kernels_numpy

logger = logging.getLogger(__name__)

_ENV_VAR = "FMGSR_BACKEND"

_backends: dict[str, ModuleType] = {"numpy": _kernels_numpy}
try:
    from . import _kernels_numba

    _backends["numba"] = _kernels_numba
except ImportError:  # pragma: no cover - numba is an install dependency
    logger.warning("numba unavailable, falling back to the numpy kernels")

_active: ModuleType | None = None
_active_name = ""


def available_backends() -> tuple[str, ...]:
    """Names of the importable kernel lanes."""
    return tuple(sorted(_backends))


def set_backend(name: str) -> None:
    """Select the kernel lane by name (``numba`` or ``numpy``)."""
    global _active, _active_name
    if name not in _backends:
        raise ValueError(
            f"unknown backend {name!r}, available: {available_backends()}"
        )
    _active = _backends[name]
    _active_name = name


def get_backend() -> str:
    """Name of the active kernel lane."""
    active()
    return _active_name


def active() -> ModuleType:
    """The active kernel module, resolving the default on first use."""
    if _active is None:
        name = os.environ.get(_ENV_VAR, "")
        if not name:
            name = "numba" if "numba" in _backends else "numpy"
        set_backend(name)
    return _active

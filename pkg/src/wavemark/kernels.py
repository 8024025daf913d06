"""Backend selection for the hot kernels.

The compiled Cython extension is used when it was built; otherwise the
numpy fallback. Set ``WAVEMARK_BACKEND=python`` to force the fallback.
Both backends produce bit-identical results.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _pykernels

__all__ = ["backend", "available_backends", "get_backend", "BACKEND_NAME"]


def _load_compiled() -> ModuleType | None:
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels


_compiled = _load_compiled()


def available_backends() -> dict[str, ModuleType]:
    found = {"python": _pykernels}
    if _compiled is not None:
        found["cython"] = _compiled
    return found


def get_backend(name: str | None = None) -> ModuleType:
    """Return the kernel module ``name`` ("cython" or "python"), or the default."""
    if name is None:
        name = os.environ.get("WAVEMARK_BACKEND", "").strip().lower() or None
    if name is None:
        return _compiled if _compiled is not None else _pykernels
    backends = available_backends()
    if name not in backends:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(backends)}")
    return backends[name]


backend = get_backend()
BACKEND_NAME: str = backend.NAME

"""Backend selection for the hybrid cell kernel.

The compiled extension is used when it imports; setting
``HYBRIDTVD_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from hybridtvd import _kernels_py
from hybridtvd._kernels_py import (ACCEPT_ALL, BW, BWC, CCS, FLWBW, FROMM, LW, LXW,
                                   REJECT_ALL, THEOREM)

_compiled = None
if os.environ.get("HYBRIDTVD_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from hybridtvd import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "numpy"
hybrid_update = (_compiled or _kernels_py).hybrid_update


def get_backend(name=None):
    """Return the ``hybrid_update`` of the named backend (default: active)."""
    if name is None:
        return hybrid_update
    if name == "numpy":
        return _kernels_py.hybrid_update
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernel extension is not available")
        return _compiled.hybrid_update
    raise ValueError(f"unknown backend {name!r}")


def compiled_available() -> bool:
    return _compiled is not None


__all__ = ["BACKEND", "hybrid_update", "get_backend", "compiled_available",
           "LW", "BW", "FLWBW", "THEOREM", "ACCEPT_ALL", "REJECT_ALL",
           "FROMM", "LXW", "BWC", "CCS"]

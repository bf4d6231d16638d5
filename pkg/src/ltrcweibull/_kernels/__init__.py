"""Numeric kernel backend selection.

The compiled Cython kernel is preferred when present; the NumPy fallback is
always available. Selection happens once at import time and can be forced
with the LTRC_BACKEND environment variable ("cython" or "python").
"""

import os

from . import pyimpl

try:
    from . import _cyimpl
except ImportError:
    _cyimpl = None

_requested = os.environ.get("LTRC_BACKEND", "auto").strip().lower()

if _requested in ("", "auto"):
    _active = _cyimpl if _cyimpl is not None else pyimpl
elif _requested == "cython":
    if _cyimpl is None:
        raise ImportError(
            "LTRC_BACKEND=cython but the compiled kernel is not available; "
            "reinstall with a C compiler or unset LTRC_BACKEND"
        )
    _active = _cyimpl
elif _requested == "python":
    _active = pyimpl
else:
    raise ValueError(f"unknown LTRC_BACKEND value: {_requested!r}")


def backend_name():
    """Name of the kernel backend selected at import: 'cython' or 'python'."""
    return "python" if _active is pyimpl else "cython"


w_scaled_sums = _active.w_scaled_sums
fixed_point_alpha = _active.fixed_point_alpha
CONVERGED = pyimpl.CONVERGED
MAX_ITER = pyimpl.MAX_ITER
INVALID = pyimpl.INVALID

"""JIT switch.

Set ``XHERMITE_DISABLE_NUMBA=1`` to run every kernel on the pure numpy path.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_flag = os.environ.get("XHERMITE_DISABLE_NUMBA", "").strip().lower()
USE_NUMBA = numba is not None and _flag not in ("1", "true", "yes", "on")

NJIT_OPTS = {"cache": False, "nogil": True}


def njit(fn):
    """Compile ``fn`` with numba when available, otherwise return it untouched."""
    if numba is None:
        return fn
    return numba.njit(**NJIT_OPTS)(fn)

"""Backend switch for the compiled kernels.

Set ``SNEWTON_DISABLE_NUMBA=1`` to force the pure-numpy code paths. The
flag is read once, at import time.
"""

import os

_DISABLED = os.environ.get("SNEWTON_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}

try:
    if _DISABLED:
        raise ImportError("numba disabled by SNEWTON_DISABLE_NUMBA")
    import numba

    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"

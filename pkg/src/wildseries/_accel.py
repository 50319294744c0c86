"""Backend selection for the truncated-series kernels.

Set ``WILDSERIES_NO_NUMBA=1`` to force the pure-numpy path.  The numba path is
used whenever numba imports cleanly and the flag is unset.
"""
from __future__ import annotations

import os

_FLAG = "WILDSERIES_NO_NUMBA"


def numba_disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    import numba as _numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and not numba_disabled()


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if HAVE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn

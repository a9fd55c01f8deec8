"""Numba switch for the hot kernels.

Set ``DOUBLEROOT_DISABLE_NUMBA=1`` before import to run every kernel as plain
Python over numpy arrays. The same source backs both paths.
"""

import os

_FLAG = os.environ.get("DOUBLEROOT_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise the identity decorator."""
    if USE_NUMBA:
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda func: func


def python_impl(func):
    """Return the uncompiled Python function behind a kernel."""
    return getattr(func, "py_func", func)

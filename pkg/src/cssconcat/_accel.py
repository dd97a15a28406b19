"""Numba switch.

Set ``CSSCONCAT_DISABLE_NUMBA=1`` to run every kernel through its pure-numpy
path.  The flag is read once at import time.
"""
import os

DISABLE_ENV = "CSSCONCAT_DISABLE_NUMBA"

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get(DISABLE_ENV, "").lower() not in (
    "1",
    "true",
    "yes",
)


def njit(*args, **kwargs):
    """``numba.njit(cache=True)`` when enabled, identity otherwise."""
    if args and callable(args[0]) and len(args) == 1 and not kwargs:
        fn = args[0]
        if USE_NUMBA:
            return numba.njit(cache=True)(fn)
        return fn

    def wrap(fn):
        if USE_NUMBA:
            kwargs.setdefault("cache", True)
            return numba.njit(*args, **kwargs)(fn)
        return fn

    return wrap

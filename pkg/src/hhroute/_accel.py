"""Kernel compilation switch.

Hot loops are written in the numba-compatible subset of Python. By default they
are compiled with ``numba.njit``; setting ``HHROUTE_NO_NUMBA=1`` keeps them as
plain Python functions operating on numpy arrays (slow, but dependency-light and
handy when debugging a kernel).
"""
import os

NUMBA_DISABLED = os.environ.get("HHROUTE_NO_NUMBA", "0").lower() in ("1", "true", "yes")

try:
    if NUMBA_DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:
    _njit = None
    HAVE_NUMBA = False


def kernel(fn):
    """Compile ``fn`` with numba when enabled; the original stays on ``fn.py_func``."""
    if not HAVE_NUMBA:
        fn.py_func = fn
        return fn
    return _njit(cache=True, nogil=True)(fn)


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "python"

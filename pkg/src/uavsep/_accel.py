"""Backend selection for the numeric kernels.

Kernels are compiled with numba when it is importable.  Setting the
environment variable ``UAVSEP_DISABLE_NUMBA=1`` forces the plain
numpy/Python path, which runs the same source uncompiled.
"""

import os
from warnings import warn

_FLAG = "UAVSEP_DISABLE_NUMBA"


def _numba_requested():
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _numba_requested():
        raise ImportError
    from numba import njit as _njit

    BACKEND = "numba"
except ImportError:
    _njit = None
    BACKEND = "numpy"
    if _numba_requested():
        warn("numba not available; kernels run uncompiled", RuntimeWarning)


def jit(fn):
    """Compile ``fn`` with numba (cached) or return it unchanged.

    The original Python function stays reachable as ``fn.py_func`` on both
    paths so benchmarks and tests can run either implementation.
    """
    if _njit is None:
        fn.py_func = fn
        return fn
    return _njit(cache=True)(fn)

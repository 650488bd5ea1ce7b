"""Backend selection for the compiled kernels.

Kernels are written once as plain numpy-array loops.  When numba is importable
and ``LATINQUOT_DISABLE_JIT`` is unset (or ``0``), they are compiled with
``numba.njit``; otherwise the interpreted versions run unchanged.
"""

import os

_flag = os.environ.get("LATINQUOT_DISABLE_JIT", "0").strip().lower()
_disabled = _flag not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba
except ImportError:  # pragma: no cover - depends on environment
    numba = None

JIT_ENABLED = numba is not None


def njit(func):
    """Compile ``func`` with numba when enabled, else return it untouched.

    The original function is always reachable as ``.py_func`` so tests and the
    benchmark can exercise both paths in a single process.
    """
    if numba is None:
        func.py_func = func
        return func
    return numba.njit(cache=True)(func)


def backend_name():
    return "numba" if JIT_ENABLED else "python"

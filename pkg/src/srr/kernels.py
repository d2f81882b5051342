"""Pick the simplex kernel at import time.

The compiled float64 kernel is used when the extension was built; otherwise
(or with ``SRR_KERNEL=python``) float solves run on the pure-Python loop.
Exact solves always use the pure-Python loop since they run on Fractions.
"""
import os

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

OPTIMAL = _pykernel.OPTIMAL
UNBOUNDED = _pykernel.UNBOUNDED
ITERATION_LIMIT = _pykernel.ITERATION_LIMIT

HAVE_COMPILED = _ckernel is not None
BACKEND = "compiled" if HAVE_COMPILED and os.environ.get("SRR_KERNEL", "") != "python" else "python"


def float_kernel(backend=None):
    """Return ``(module, uses_numpy)`` for float tableaus."""
    backend = backend or BACKEND
    if backend == "compiled":
        if _ckernel is None:
            raise ImportError("compiled kernel not available; build the extension first")
        return _ckernel, True
    return _pykernel, False

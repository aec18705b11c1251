"""Numba switch for the hot kernels.

The loop kernels in :mod:`monoidk.kernels` are compiled with ``numba.njit``
whenever numba imports.  Dispatch uses them unless ``MONOIDK_DISABLE_NUMBA``
is set to a truthy value, in which case the vectorised numpy paths run.
"""

import logging
import os

logger = logging.getLogger(__name__)

try:
    import numba

    HAVE_NUMBA = True
    logging.getLogger("numba").setLevel(logging.WARNING)
except ImportError:  # pragma: no cover - numba is optional
    numba = None
    HAVE_NUMBA = False


def numba_disabled() -> bool:
    return os.environ.get("MONOIDK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


def use_numba() -> bool:
    """True when dispatch should call the compiled loop kernels."""
    return HAVE_NUMBA and not numba_disabled()


def njit(func):
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(func)
    return func


def backend_name() -> str:
    return "numba" if use_numba() else "numpy"

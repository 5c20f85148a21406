"""Numba acceleration shim.

Hot kernels are written twice: an explicit-loop version compiled with
numba.njit, and a vectorized numpy fallback. Setting INKSCREEN_DISABLE_NUMBA=1
(or numba being unimportable) selects the fallback at import time. Both
implementations of every kernel stay importable so the benchmark and the
parity tests can compare them directly.
"""

from __future__ import annotations

import os


def _env_disabled() -> bool:
    return os.environ.get("INKSCREEN_DISABLE_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
        "on",
    )


NUMBA_ENABLED = False
if not _env_disabled():
    try:
        from numba import njit as _numba_njit

        NUMBA_ENABLED = True
    except ImportError:
        pass

if NUMBA_ENABLED:
    njit = _numba_njit
else:

    def njit(*args, **kwargs):
        """Stand-in for numba.njit that leaves the function uncompiled."""
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap

"""Kernel backend selection.

The hot kernels in :mod:`pbx.kernels` exist twice: a numba ``@njit``
version and a pure-numpy version.  ``PBX_BACKEND=numpy`` forces the
fallback path; ``PBX_BACKEND=numba`` demands the accelerated one (and
fails loudly if numba is missing); anything else auto-detects.

``PBX_THREADS`` caps numba's internal thread pool.  BLAS/FFT threading
is owned by numpy and is not touched here.
"""

import os


def _pick_backend() -> bool:
    choice = os.environ.get("PBX_BACKEND", "auto").strip().lower()
    if choice == "numpy":
        return False
    if choice in ("auto", "", "numba"):
        try:
            import numba  # noqa: F401
        except ImportError:
            if choice == "numba":
                raise
            return False
        return True
    raise ValueError(
        f"unknown PBX_BACKEND={choice!r}; expected 'numba', 'numpy' or 'auto'"
    )


USE_NUMBA = _pick_backend()
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    _cap = os.environ.get("PBX_THREADS", "").strip()
    if _cap:
        import numba

        numba.set_num_threads(max(1, min(int(_cap), numba.config.NUMBA_NUM_THREADS)))

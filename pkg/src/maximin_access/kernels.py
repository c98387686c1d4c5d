"""Kernel dispatch.

``MAXIMIN_ACCESS_KERNELS=numpy`` selects the pure-numpy path; the default is
numba, falling back to numpy when numba is not importable.
"""
import os

from . import _kernels_numpy

BACKEND = os.environ.get("MAXIMIN_ACCESS_KERNELS", "numba").strip().lower()

if BACKEND == "numba":
    try:
        from . import _kernels_numba as _impl
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _impl = _kernels_numpy
        BACKEND = "numpy"
elif BACKEND == "numpy":
    _impl = _kernels_numpy
else:
    raise ImportError(f"MAXIMIN_ACCESS_KERNELS must be 'numba' or 'numpy', got {BACKEND!r}")

simulate_hits = _impl.simulate_hits
simulate_once = _impl.simulate_once
reached_state = _impl.reached_state
extend_state = _impl.extend_state
candidate_scores = _impl.candidate_scores
bfs_distances = _impl.bfs_distances
exact_probs = _impl.exact_probs


def set_threads(count: int) -> None:
    """Cap numba worker threads; 0 leaves the default."""
    if count and BACKEND == "numba":
        import numba

        numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))

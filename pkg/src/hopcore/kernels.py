"""Kernel dispatch.

The numba versions are used when numba imports cleanly, unless the environment
variable ``HOPCORE_DISABLE_NUMBA`` is set to a truthy value, in which case the
pure-numpy versions are used.  Both backends stay importable for benchmarking.
"""

from __future__ import annotations

import os

from . import _numpy_kernels as numpy_backend
from ._numpy_kernels import INF

_FLAG = "HOPCORE_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("1", "true", "yes", "on")


try:
    from . import _numba_kernels as numba_backend
except ImportError:  # numba missing or broken
    numba_backend = None

if numba_backend is not None and _numba_requested():
    backend = numba_backend
    BACKEND_NAME = "numba"
else:
    backend = numpy_backend
    BACKEND_NAME = "numpy"

hop_layers = backend.hop_layers
all_pairs_hop = backend.all_pairs_hop
floyd_warshall = backend.floyd_warshall
subset_merge = backend.subset_merge

__all__ = [
    "INF",
    "BACKEND_NAME",
    "numpy_backend",
    "numba_backend",
    "hop_layers",
    "all_pairs_hop",
    "floyd_warshall",
    "subset_merge",
]

"""Kernel backend selection.

The time stepper spends essentially all of its time in a handful of
elementwise/bit-indexed kernels over dim x dim complex matrices.  Two
interchangeable implementations exist:

* ``dotoc._kernels_numba``  - @njit kernels, parallel over rows (default)
* ``dotoc._kernels_numpy``  - pure-numpy fallback, always available

Set ``DOTOC_BACKEND=numpy`` or ``DOTOC_BACKEND=numba`` in the environment to
force one; the default is numba when it imports, numpy otherwise.  The numba
kernels write disjoint output rows per thread and perform no cross-thread
reductions, so results are bit-identical for any NUMBA_NUM_THREADS.

``benchmarks/bench_kernels.py`` times both backends side by side.
"""

import os

from . import _kernels_numpy

_ENV_VAR = "DOTOC_BACKEND"

kernels = _kernels_numpy
_active = "numpy"


def use_backend(name: str) -> str:
    """Select the kernel backend ("numba" or "numpy"); returns the active name."""
    global kernels, _active
    if name == "numpy":
        kernels = _kernels_numpy
        _active = "numpy"
    elif name == "numba":
        from . import _kernels_numba

        kernels = _kernels_numba
        _active = "numba"
    else:
        raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")
    return _active


def active_backend() -> str:
    return _active


def _init_from_env() -> None:
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested == "numpy":
        use_backend("numpy")
        return
    if requested == "numba":
        use_backend("numba")
        return
    if requested:
        raise ValueError(f"{_ENV_VAR}={requested!r} not understood (use 'numba' or 'numpy')")
    try:
        use_backend("numba")
    except ImportError:
        use_backend("numpy")


_init_from_env()

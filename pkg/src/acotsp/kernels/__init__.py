"""Hot-loop kernels with two interchangeable backends.

The numba backend JIT-compiles the inner loops; the numpy backend is a
pure-numpy twin kept bit-for-bit compatible (same accumulation order,
same tie-breaking), so a seeded run yields identical tours under either.
Selection: the ACOTSP_BACKEND environment variable ("numba" or "numpy"),
defaulting to numba when importable, with `use()` as a programmatic
override for benchmarks and tests.
"""

import os

from . import numpy_backend

try:
    from . import numba_backend
except ImportError:  # numba not installed; numpy path serves everything
    numba_backend = None

ENV_VAR = "ACOTSP_BACKEND"

_forced = None


def backend_names():
    return ("numba", "numpy") if numba_backend is not None else ("numpy",)


def get_backend(name):
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        if numba_backend is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        return numba_backend
    raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")


def active():
    """Backend in effect: use() override, else ACOTSP_BACKEND, else numba."""
    if _forced is not None:
        return _forced
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env:
        return get_backend(env)
    return numba_backend if numba_backend is not None else numpy_backend


def use(name):
    """Force a backend by name; use(None) restores env/default selection."""
    global _forced
    _forced = None if name is None else get_backend(name)

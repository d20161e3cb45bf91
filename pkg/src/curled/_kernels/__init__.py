"""Backend selection for the hot kernels.

``CURLED_BACKEND`` picks the implementation:

  auto   (default) numba when importable, else pure numpy
  numba  require the jitted kernels, fail if numba is missing
  numpy  force the pure-numpy fallback
"""

from __future__ import annotations

import os

from .impl import build_kernels

_CHOICES = ("auto", "numba", "numpy")


def _select() -> tuple[str, object]:
    requested = os.environ.get("CURLED_BACKEND", "auto").strip().lower()
    if requested not in _CHOICES:
        raise ValueError(f"CURLED_BACKEND must be one of {_CHOICES}, got {requested!r}")
    if requested in ("auto", "numba"):
        try:
            from numba import njit
        except ImportError:
            if requested == "numba":
                raise
        else:
            return "numba", build_kernels(njit(cache=False, nogil=True))
    return "numpy", build_kernels(lambda f: f)


def numpy_kernels():
    """The fallback set, always available (used by the benchmark)."""
    return build_kernels(lambda f: f)


def numba_kernels():
    """The jitted set, independent of the env flag (used by the benchmark)."""
    from numba import njit

    return build_kernels(njit(cache=False, nogil=True))


_BACKEND_NAME, kernels = _select()


def active_backend() -> str:
    return _BACKEND_NAME

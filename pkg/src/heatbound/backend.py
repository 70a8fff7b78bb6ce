"""Numerical backend selection for the batch series kernels.

The per-sample image and eigenfunction sums are the hot inner loops of the
verification sweeps.  Two interchangeable implementations exist:

* `_series_numba` - scalar loops compiled with numba (default when numba
  imports cleanly);
* `_series_numpy` - vectorized numpy, always available.

Set HEATBOUND_BACKEND=numpy (or numba / auto) to force a choice; `auto`
falls back to numpy when numba is missing or fails to compile.  Both
backends are importable side by side for the benchmark and the agreement
tests.
"""

from __future__ import annotations

import os

from . import _series_numpy

_CHOICES = ("auto", "numba", "numpy")


def _resolve() -> tuple[str, object]:
    want = os.environ.get("HEATBOUND_BACKEND", "auto").strip().lower()
    if want not in _CHOICES:
        raise ValueError(
            f"HEATBOUND_BACKEND must be one of {_CHOICES}, got {want!r}"
        )
    if want == "numpy":
        return "numpy", _series_numpy
    try:
        from . import _series_numba
        return "numba", _series_numba
    except ImportError:
        if want == "numba":
            raise
        return "numpy", _series_numpy


_NAME, series = _resolve()


def backend_name() -> str:
    """Which implementation is serving the batch kernels."""
    return _NAME

"""Kernel backend selection.

The compiled extension ``rossby_lab._kernels`` is preferred when importable;
otherwise the NumPy fallback ``rossby_lab._kernels_py`` is used. Setting the
environment variable ``ROSSBY_LAB_PURE_PYTHON=1`` forces the fallback, which
the benchmark suite uses to compare the two.
"""

from __future__ import annotations

import importlib
import os

__all__ = [
    "BACKEND",
    "get_backend",
    "modal_propagate",
    "relative_pressure_grid",
    "pressure_remainder_grid",
]

_BACKENDS = {"cython": "rossby_lab._kernels", "python": "rossby_lab._kernels_py"}


def get_backend(name: str):
    """Import and return a kernel backend module by name."""
    return importlib.import_module(_BACKENDS[name])


if os.environ.get("ROSSBY_LAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = get_backend("python")
    BACKEND = "python"
else:
    try:
        _impl = get_backend("cython")
        BACKEND = "cython"
    except ImportError:
        _impl = get_backend("python")
        BACKEND = "python"

modal_propagate = _impl.modal_propagate
relative_pressure_grid = _impl.relative_pressure_grid
pressure_remainder_grid = _impl.pressure_remainder_grid

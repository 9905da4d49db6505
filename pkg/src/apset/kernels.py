"""Backend selection for the hot kernels.

The compiled extension ``apset._native`` is preferred; the NumPy module
``apset._kernels_py`` is the fallback.  Set ``APSET_PURE_PYTHON=1`` to force
the fallback (used by the parity tests and the benchmark).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("APSET_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
        BACKEND = "native"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _kernels_py
        BACKEND = "python"

feasible_1d = _impl.feasible_1d
greedy_matching_1d = _impl.greedy_matching_1d
bottleneck_1d = _impl.bottleneck_1d
bump_train = _impl.bump_train


def backends():
    """(name, module) pairs of every importable backend."""
    found = [("python", _kernels_py)]
    try:
        from . import _native
        found.append(("native", _native))
    except ImportError:
        pass
    return found

"""Select the compiled feasibility kernel when available.

Set GORBIT_PURE_PYTHON=1 to force the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
feasibility_batch = _kernels_py.feasibility_batch

if os.environ.get("GORBIT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels

        feasibility_batch = _kernels.feasibility_batch
        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

__all__ = ["BACKEND", "feasibility_batch"]

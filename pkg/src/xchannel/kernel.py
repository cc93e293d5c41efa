"""Selects the grid kernel backend at import time.

The compiled extension is preferred. Set ``XCHANNEL_PURE_PYTHON=1`` to force
the pure-Python fallback.
"""
import os

from xchannel import _kernel_py

if os.environ.get("XCHANNEL_PURE_PYTHON", "") not in ("", "0"):
    evaluate_grid = _kernel_py.evaluate_grid
    BACKEND = "python"
else:
    try:
        from xchannel._kernel import evaluate_grid
        BACKEND = "cython"
    except ImportError:
        evaluate_grid = _kernel_py.evaluate_grid
        BACKEND = "python"

__all__ = ["evaluate_grid", "BACKEND"]

"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``HETORBIT_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the pure-Python twin is used.
"""
import os

from . import _pykernels

_force_python = os.environ.get("HETORBIT_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_python:
        raise ImportError("pure Python backend requested")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"

orbit = _impl.orbit
residual = _impl.residual
action_sum = _impl.action_sum

__all__ = ["BACKEND", "orbit", "residual", "action_sum"]

"""Backend selection for the scalar kernels.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``SU11SQUEEZE_PURE_PYTHON`` is set, the pure-Python
module is used.  ``BACKEND`` names the active choice.
"""
import os

from su11squeeze import _kernels_py

if os.environ.get("SU11SQUEEZE_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from su11squeeze import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

log_gamma = _impl.log_gamma
log_gamma_array = _impl.log_gamma_array
bessel_i = _impl.bessel_i
bessel_i_ratio = _impl.bessel_i_ratio
marching_segments = _impl.marching_segments

__all__ = [
    "BACKEND",
    "log_gamma",
    "log_gamma_array",
    "bessel_i",
    "bessel_i_ratio",
    "marching_segments",
]

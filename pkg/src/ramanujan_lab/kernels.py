"""Select the compiled kernels when available, else the pure-Python ones.

Set RAMANUJAN_LAB_PURE=1 to force the fallback.
"""
import os

COMPILED = False
if os.environ.get("RAMANUJAN_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        COMPILED = True
    except ImportError:
        _impl = None
if not COMPILED:
    from . import _kernels_py as _impl

bs_chudnovsky = _impl.bs_chudnovsky
linear_series_exact = _impl.linear_series_exact
self_convolution = _impl.self_convolution
horner_fixed = _impl.horner_fixed
lambert_fixed = _impl.lambert_fixed
hyp_fixed = _impl.hyp_fixed

BACKEND = "cython" if COMPILED else "python"

__all__ = ["bs_chudnovsky", "linear_series_exact", "self_convolution", "horner_fixed",
           "lambert_fixed", "hyp_fixed", "COMPILED", "BACKEND"]

"""Backend selection for the exact kernels.

The compiled extension is used when it was built; ``SUMMA_PURE=1`` forces
the pure-Python twin.
"""

import os

from . import _pykernels

if os.environ.get("SUMMA_PURE") == "1":
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

dot = _impl.dot
convolve_at = _impl.convolve_at
weighted_sum = _impl.weighted_sum
horner = _impl.horner
bareiss = _impl.bareiss

__all__ = ["BACKEND", "dot", "convolve_at", "weighted_sum", "horner", "bareiss"]

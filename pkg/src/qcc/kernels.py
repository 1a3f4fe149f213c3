"""Backend selection for the sparse polynomial kernels.

The compiled extension ``qcc._ckernels`` is used when it was built and
``QCC_PURE_PYTHON`` is unset; otherwise the pure-Python module is used.
"""
from __future__ import annotations

import os

from ._pykernels import BIAS, FIELD_BITS, MASK, NotDivisible
from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("QCC_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels

mul = _impl.mul
add_into = _impl.add_into
prune = _impl.prune
shift = _impl.shift
relabel = _impl.relabel
div_linear = _impl.div_linear

__all__ = [
    "BACKEND",
    "BIAS",
    "FIELD_BITS",
    "MASK",
    "NotDivisible",
    "add_into",
    "div_linear",
    "mul",
    "prune",
    "relabel",
    "shift",
]

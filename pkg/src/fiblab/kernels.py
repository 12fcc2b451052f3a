"""Kernel selection.

The compiled extension is used when it imports; ``FIBLAB_PURE_PYTHON=1`` forces
the pure-Python fallback (handy for debugging and for the benchmark).
"""
from __future__ import annotations

import os

if os.environ.get("FIBLAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pykernels as _impl

IMPLEMENTATION: str = _impl.IMPLEMENTATION
sweep = _impl.sweep
rref = _impl.rref
nullspace = _impl.nullspace
circuits = _impl.circuits
primitive = _impl.primitive

__all__ = ["IMPLEMENTATION", "sweep", "rref", "nullspace", "circuits", "primitive"]

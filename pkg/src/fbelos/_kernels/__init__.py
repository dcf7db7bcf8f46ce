"""Kernel backend selection.

The compiled Cython kernel is preferred when importable; the pure-Python
kernel is the fallback and the reference.  Set ``FBELOS_BACKEND=python`` to
force the fallback (useful for benchmarking and parity testing).  Both
backends are bit-identical by construction.
"""

import os

from . import _quadpy
from ._tanhsinh import DD_DELTA_THRESHOLD, MAX_LEVEL, build_tables

_forced = os.environ.get("FBELOS_BACKEND", "").strip().lower()

if _forced in ("", "cython", "c"):
    try:
        from . import _quadcy as _impl
        BACKEND = "cython"
    except ImportError:
        if _forced:
            raise
        _impl = _quadpy
        BACKEND = "python"
elif _forced == "python":
    _impl = _quadpy
    BACKEND = "python"
else:
    raise RuntimeError(f"unknown FBELOS_BACKEND value: {_forced!r}")

eval_tape = _impl.eval_tape
integrate_tape = _impl.integrate_tape

STATUS_OK = _quadpy.STATUS_OK
STATUS_NO_CONVERGENCE = _quadpy.STATUS_NO_CONVERGENCE
STATUS_DOMAIN_ERROR = _quadpy.STATUS_DOMAIN_ERROR

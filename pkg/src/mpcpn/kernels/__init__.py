"""State-space kernels with a selectable backend.

Set ``MPCPN_BACKEND=numpy`` to bypass numba; the default is ``numba`` when it
imports, ``numpy`` otherwise.
"""

from __future__ import annotations

import os

from . import _numpy

FA, SYN, GA = _numpy.FA, _numpy.SYN, _numpy.GA

_requested = os.environ.get("MPCPN_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"MPCPN_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import _numba as _impl
    except ImportError:  # pragma: no cover - numba missing
        _impl = _numpy
else:
    _impl = _numpy

BACKEND = "numba" if _impl is not _numpy else "numpy"

exists_tables = _impl.exists_tables
mp_reach = _impl.mp_reach
async_reach = _impl.async_reach


def backend(name: str):
    """Return the kernel module for ``name`` regardless of the env flag (tests, benchmarks)."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba

        return _numba
    raise ValueError(f"unknown backend {name!r}")

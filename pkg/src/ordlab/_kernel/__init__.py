"""Kernel selection: compiled extension if available, pure Python otherwise.

Set ORDLAB_KERNEL=python to force the pure fallback (used by the parity
tests and the benchmark).
"""

from __future__ import annotations

import os

from . import pycore

CONFLICT_ANTISYMMETRY = pycore.CONFLICT_ANTISYMMETRY
CONFLICT_IDENTITY = pycore.CONFLICT_IDENTITY
CONFLICT_CLOSURE = pycore.CONFLICT_CLOSURE
STATUS_DONE = pycore.STATUS_DONE
STATUS_SOLUTION_LIMIT = pycore.STATUS_SOLUTION_LIMIT
STATUS_NODE_BUDGET = pycore.STATUS_NODE_BUDGET

if os.environ.get("ORDLAB_KERNEL", "").lower() in {"py", "python", "pure"}:
    _impl = pycore
    BACKEND = "python"
else:
    try:
        from . import _conecore as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pycore
        BACKEND = "python"

propagate = _impl.propagate
enumerate_complete = _impl.enumerate_complete


def backend_name() -> str:
    return BACKEND

"""Search kernel with a compiled fast path and a pure-Python fallback.

Both backends implement the same ``Core`` contract (see pycore.py for
the reference). The compiled extension is preferred when it imported
cleanly; setting ``MORABA_PURE_KERNEL=1`` forces the fallback, which the
parity tests and the benchmark use to compare the two.
"""

from __future__ import annotations

import os

from . import pycore


def _select():
    if os.environ.get("MORABA_PURE_KERNEL"):
        return pycore
    try:
        from . import cycore
    except ImportError:
        return pycore
    return cycore


backend = _select()
Core = backend.Core


def backend_name() -> str:
    return backend.backend_name()

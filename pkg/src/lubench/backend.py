"""Kernel backend selection.

The compiled extension is preferred when present; ``LUBENCH_BACKEND=python``
or ``=cython`` forces a choice. Both backends expose ``forward_batch`` with
identical semantics (floating-point results may differ in the last bits due
to summation order).
"""

import os

from . import _pycore

_requested = os.environ.get("LUBENCH_BACKEND", "").strip().lower()

if _requested == "python":
    _impl = _pycore
    BACKEND = "python"
else:
    try:
        from . import _fastcore as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise ImportError(
                "LUBENCH_BACKEND=cython requested but the compiled "
                "extension is not built; install with `pip install -e .`"
            )
        _impl = _pycore
        BACKEND = "python"

ACT_TANH = _pycore.ACT_TANH
ACT_LOGISTIC = _pycore.ACT_LOGISTIC

forward_batch = _impl.forward_batch
pi_stats = _impl.pi_stats

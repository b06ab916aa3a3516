"""Selects the kernel implementation at import time.

The compiled extension is used when it importable; otherwise the NumPy
fallback. Set HINGSENT_BACKEND=python to force the fallback, or
HINGSENT_BACKEND=compiled to fail loudly when the extension is missing.
"""

from __future__ import annotations

import os

_requested = os.environ.get("HINGSENT_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "compiled", "python"):
    raise ImportError(
        f"HINGSENT_BACKEND must be 'auto', 'compiled' or 'python', got {_requested!r}"
    )

if _requested == "python":
    from . import kernels_py as _impl

    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        if _requested == "compiled":
            raise
        from . import kernels_py as _impl

        COMPILED = False

lstm_forward = _impl.lstm_forward
lstm_backward = _impl.lstm_backward
conv1d_forward = _impl.conv1d_forward
conv1d_backward = _impl.conv1d_backward


def backend_name() -> str:
    return "compiled" if COMPILED else "python"

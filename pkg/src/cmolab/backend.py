"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is the
fallback.  ``CMO_BACKEND=python`` or ``CMO_BACKEND=compiled`` forces a
choice (the latter raises if the extension did not build).
"""

from __future__ import annotations

import os

from . import _kernels_py

_requested = os.environ.get("CMO_BACKEND", "").strip().lower()

if _requested == "python":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _compiled
        kernels = _compiled
        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "CMO_BACKEND=compiled but the cmolab._kernels extension is "
                "not built; run `pip install -e . --no-build-isolation`"
            )
        kernels = _kernels_py
        BACKEND = "python"

"""Hot kernels, compiled when the extension is built, pure Python otherwise.

Set ``ROTEPROVER_PURE=1`` to force the pure-Python versions.
"""
from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
subset_construction = _fallback.subset_construction
search = _fallback.search
refine = _fallback.refine

if not os.environ.get("ROTEPROVER_PURE"):
    try:
        from . import _kernels
    except ImportError:
        _kernels = None
    else:
        BACKEND = "compiled"
        subset_construction = _kernels.subset_construction
        search = _kernels.search
        refine = _kernels.refine
else:
    _kernels = None

__all__ = ["BACKEND", "refine", "search", "subset_construction"]

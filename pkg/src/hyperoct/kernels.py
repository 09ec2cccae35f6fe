"""Backend selection for the group-table kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Setting ``HYPEROCT_PURE_PYTHON=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("HYPEROCT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

encode = _impl.encode
product_codes = _impl.product_codes

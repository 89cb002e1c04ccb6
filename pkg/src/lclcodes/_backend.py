"""Selects the elimination backend once, at import time.

The compiled Cython kernels are preferred when built; the pure-Python twin
is the fallback.  Set LCLCODES_PURE_PYTHON=1 to force the fallback (used by
the benchmark and the backend-agreement tests).
"""

import os

if os.environ.get("LCLCODES_PURE_PYTHON"):
    from . import _gfkernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _gfkernels as kernels  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        from . import _gfkernels_py as kernels
        BACKEND = "python"

"""Dense simplex LP solver with a compiled pivot kernel and a numpy fallback.

The pivot loop is the hot spot of every distortion computation, so it exists
twice with identical semantics: ``_kernel_c`` (Cython) and ``_kernel_py``
(numpy). The compiled kernel is preferred when the extension built; set
``SIMEX_LP_BACKEND=python`` or ``=c`` to force a choice. ``kernel`` is the
module actually in use.
"""

import os

from . import _kernel_py

_choice = os.environ.get("SIMEX_LP_BACKEND", "").strip().lower()

if _choice == "python":
    kernel = _kernel_py
elif _choice == "c":
    from . import _kernel_c as kernel  # hard failure if forced but not built
else:
    try:
        from . import _kernel_c as kernel
    except ImportError:
        kernel = _kernel_py

from .solver import LpError, LpResult, solve_lp  # noqa: E402

BACKEND = kernel.BACKEND_NAME

__all__ = ["solve_lp", "LpResult", "LpError", "BACKEND", "kernel"]

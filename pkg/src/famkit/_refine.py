"""Refinement kernel selection: compiled extension with pure-Python fallback.

Set ``FAMKIT_PURE_PYTHON=1`` to force the fallback (used by the benchmark
to compare both).
"""

from __future__ import annotations

import os

from . import _refine_py

if os.environ.get("FAMKIT_PURE_PYTHON"):
    _impl = _refine_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _refine_py

poly_range = _impl.poly_range
refine_poly = _impl.refine_poly
refine_generic = _refine_py.refine_generic


def backend_name() -> str:
    """Which kernel integrates polynomials: "cython" or "python"."""
    return _impl.BACKEND

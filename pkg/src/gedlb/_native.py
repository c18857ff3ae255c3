"""Select the kernel implementation: compiled extension when available,
pure Python otherwise.  Set GEDLB_PURE=1 to force the fallback."""

import os

if os.environ.get("GEDLB_PURE"):
    from . import _kernels_py as _impl
    COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        COMPILED = True
    except ImportError:
        from . import _kernels_py as _impl
        COMPILED = False

isotonic_nonincreasing = _impl.isotonic_nonincreasing
ged_search = _impl.ged_search

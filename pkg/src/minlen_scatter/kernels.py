"""Backend selection for the recurrence kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback is used. Set ``MINLEN_SCATTER_PURE_PYTHON=1`` to force the
fallback (the test suite runs both).
"""

import os

from . import _kernels_py

if os.environ.get("MINLEN_SCATTER_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

legendre_table = _impl.legendre_table
legendre_series = _impl.legendre_series
spherical_jn_table = _impl.spherical_jn_table
spherical_yn_table = _impl.spherical_yn_table


def backends():
    """Return every importable backend module keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["compiled"] = _kernels
    return found

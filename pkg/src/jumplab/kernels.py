"""Kernel backend selection.

The compiled extension is used when it imports; setting ``JUMPLAB_PURE_PYTHON=1``
forces the pure-Python twin. Both produce bit-identical results.
"""

import os

from . import _kernels_py

DONE, ABORTED, STOPPED = _kernels_py.DONE, _kernels_py.ABORTED, _kernels_py.STOPPED

_compiled = None
if os.environ.get("JUMPLAB_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"

euler_generic = _kernels_py.euler_generic
euler_native = _compiled.euler_native if _compiled is not None else _kernels_py.euler_native
tanaka_terms = _compiled.tanaka_terms if _compiled is not None else _kernels_py.tanaka_terms


def backends():
    """Available kernel modules by name (for benchmarks and cross-checks)."""
    out = {"python": _kernels_py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out

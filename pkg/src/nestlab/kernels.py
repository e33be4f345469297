"""Backend selection for the hot scan kernels.

The compiled extension is used when it imports; otherwise (or when the
environment variable ``NESTLAB_PURE`` is set to a non-empty value other than
``0``) the pure-Python twin is used.  Both expose ``cellset_ok`` and
``scan_images`` with identical results.
"""
import os

from . import _pykernels

STAIRCASE = 0
STRICT = 1

_force_pure = os.environ.get("NESTLAB_PURE", "") not in ("", "0")

if _force_pure:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

cellset_ok = _impl.cellset_ok
scan_images = _impl.scan_images


def backends():
    """Map of every importable backend name to its module."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found

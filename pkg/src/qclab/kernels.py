"""Import-time selection of the assembly kernel backend.

The compiled Cython kernels are preferred; the pure-numpy twin is used when
the extension is unavailable or when QCLAB_PURE_PYTHON is set.  Both produce
bitwise-identical triplets (see tests/test_kernels.py).
"""

import os

from . import _kernels_py

if os.environ.get("QCLAB_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels_cy as _impl
    except ImportError:
        _impl = _kernels_py

stiffness_triplets = _impl.stiffness_triplets
mass_triplets = _impl.mass_triplets


def backend():
    """Name of the active kernel backend: 'cython' or 'python'."""
    return "cython" if _impl.__name__.endswith("_cy") else "python"

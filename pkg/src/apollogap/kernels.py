"""Backend selection for the enumeration kernels.

The compiled extension is used when it was built; otherwise, or when
``APOLLOGAP_PURE=1`` is set, the numpy versions are used.  ``BACKEND``
names the active one.
"""

import os

from . import _pykernels

if os.environ.get("APOLLOGAP_PURE"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

descartes_curvatures = _impl.descartes_curvatures
descartes_circles = _impl.descartes_circles
hecke_orbit_points = _impl.hecke_orbit_points


def backends():
    """Map of available backend name to module, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        out["compiled"] = _ckernels
    return out

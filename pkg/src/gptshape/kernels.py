"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
versions are used. ``use("python")`` / ``use("compiled")`` switch at runtime,
which the benchmark and the backend-equivalence tests rely on.
"""

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

BACKEND = "compiled" if _ckernels is not None else "python"
_active = _BACKENDS[BACKEND]


def available():
    return tuple(_BACKENDS)


def use(name):
    """Select the kernel backend; returns the previously active name."""
    global BACKEND, _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available()}")
    previous = BACKEND
    BACKEND, _active = name, _BACKENDS[name]
    return previous


def kstar_matrix(anchors, offsets, normals, curvature, weights):
    return _active.kstar_matrix(anchors, offsets, normals, curvature, weights)


def single_layer(points, weights, density, targets):
    return _active.single_layer(points, weights, density, targets)


def min_distance(a, b):
    return _active.min_distance(a, b)


def directed_max_min(a, b):
    return _active.directed_max_min(a, b)

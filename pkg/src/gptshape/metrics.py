"""Shape-comparison metrics for sampled closed curves."""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import pdist
from shapely.geometry import LinearRing, Polygon

from . import kernels
from .errors import ShapeError

__all__ = ["as_ring", "symmetric_difference", "hausdorff", "diameter", "compare"]


def as_ring(z) -> np.ndarray:
    """Validate a sampled closed curve; a repeated end point is dropped."""
    z = np.asarray(z, dtype=complex).ravel()
    if len(z) > 1 and z[0] == z[-1]:
        z = z[:-1]
    if len(z) < 3 or not np.all(np.isfinite(z)):
        raise ShapeError("a closed curve needs at least 3 finite samples")
    if not LinearRing(np.column_stack([z.real, z.imag])).is_simple:
        raise ShapeError("curve self-intersects")
    return z


def _polygon(z) -> Polygon:
    return Polygon(np.column_stack([z.real, z.imag]))


def diameter(z) -> float:
    pts = np.column_stack([np.real(z), np.imag(z)])
    return float(pdist(pts).max())


def symmetric_difference(truth, recon) -> float:
    """Area of the symmetric difference over the area enclosed by ``truth``."""
    a, b = _polygon(as_ring(truth)), _polygon(as_ring(recon))
    return float(a.symmetric_difference(b).area / a.area)


def hausdorff(truth, recon) -> float:
    """Discrete two-sided Hausdorff distance over the diameter of ``truth``."""
    t, r = as_ring(truth), as_ring(recon)
    d = max(kernels.directed_max_min(t, r), kernels.directed_max_min(r, t))
    return d / diameter(t)


def compare(truth, recon) -> dict[str, float]:
    return {
        "symmetric_difference": symmetric_difference(truth, recon),
        "hausdorff": hausdorff(truth, recon),
    }

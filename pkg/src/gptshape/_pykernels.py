"""Pure numpy implementations of the boundary-integral kernels.

These are the reference versions; ``_ckernels`` provides compiled
equivalents with the same signatures.
"""

import numpy as np


def kstar_matrix(anchors, offsets, normals, curvature, weights):
    """Nystrom matrix of the adjoint Neumann-Poincare operator.

    Nodes are ``anchors + offsets``. Entry (i, j) is
    ``<x_i - y_j, nu_i> / (2 pi |x_i - y_j|^2) * w_j`` and the diagonal is the
    smooth-curve limit ``kappa_i w_i / (4 pi)``.
    """
    d = (anchors[:, None] - anchors[None, :]) + (offsets[:, None] - offsets[None, :])
    np.fill_diagonal(d, 1.0)
    num = (d * np.conj(normals)[:, None]).real
    K = num / (2 * np.pi * (d.real**2 + d.imag**2)) * weights[None, :]
    np.fill_diagonal(K, curvature * weights / (4 * np.pi))
    return K


def single_layer(points, weights, density, targets):
    """``(1/2pi) sum_j log|z - y_j| density_j w_j`` at each target."""
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    out = np.empty(targets.shape, dtype=np.result_type(density, float))
    qw = density * weights / (2 * np.pi)
    for i, z in enumerate(targets.ravel()):
        out.flat[i] = np.sum(np.log(np.abs(z - points)) * qw)
    return out


def min_distance(a, b):
    """Smallest |a_i - b_j| over all pairs (a and b may be the same array)."""
    best = np.inf
    for start in range(0, len(a), 256):
        d = np.abs(a[start : start + 256, None] - b[None, :])
        best = min(best, float(d.min()))
    return best


def directed_max_min(a, b):
    """``max_i min_j |a_i - b_j|``."""
    worst = 0.0
    for start in range(0, len(a), 256):
        d = np.abs(a[start : start + 256, None] - b[None, :])
        worst = max(worst, float(d.min(axis=1).max()))
    return worst

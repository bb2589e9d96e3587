"""Nystrom discretization of the adjoint Neumann-Poincare operator and the
single-layer potential on a sampled boundary."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import kernels
from .conformal import BoundaryFrame
from .errors import AssemblyError, ContrastError, DomainError

__all__ = ["Contrast", "NpDiscretization", "assemble", "solve_density", "single_layer"]


@dataclass(frozen=True)
class Contrast:
    """Conductivity ``sigma`` and ``lam = (sigma + 1) / (2 (sigma - 1))``.

    ``sigma = inf`` and ``sigma = 0`` are stored exactly as ``lam = +-1/2``.
    """

    sigma: float
    lam: float

    @classmethod
    def from_sigma(cls, sigma: float) -> "Contrast":
        sigma = float(sigma)
        if np.isnan(sigma) or sigma < 0:
            raise ContrastError(f"conductivity must lie in [0, inf], got {sigma}")
        if sigma == 1:
            raise ContrastError("sigma = 1 is no inclusion")
        if np.isinf(sigma):
            return cls(np.inf, 0.5)
        if sigma == 0:
            return cls(0.0, -0.5)
        return cls(sigma, (sigma + 1) / (2 * (sigma - 1)))

    @classmethod
    def from_lambda(cls, lam: float) -> "Contrast":
        lam = float(lam)
        if not abs(lam) >= 0.5:
            raise ContrastError(f"|lambda| must be >= 1/2, got {lam}")
        if lam == 0.5:
            return cls(np.inf, 0.5)
        if lam == -0.5:
            return cls(0.0, -0.5)
        return cls((2 * lam + 1) / (2 * lam - 1), lam)

    @property
    def extreme(self) -> bool:
        return abs(self.lam) == 0.5


def _as_contrast(c) -> Contrast:
    if isinstance(c, Contrast):
        return c
    return Contrast.from_lambda(c)


@dataclass(frozen=True, eq=False)
class NpDiscretization:
    frame: BoundaryFrame
    kstar: np.ndarray
    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.frame.n


def assemble(frame: BoundaryFrame) -> NpDiscretization:
    """Trapezoidal Nystrom matrix of K* with the curvature diagonal."""
    w = frame.weights
    with np.errstate(divide="ignore", invalid="ignore"):
        anchors, offsets = frame.differences()
        K = kernels.kstar_matrix(anchors, offsets, frame.normal, frame.curvature, w)
    if not np.all(np.isfinite(K)):
        raise AssemblyError("coincident boundary samples")
    K.setflags(write=False)
    return NpDiscretization(frame, K, w)


def solve_density(disc: NpDiscretization, contrast, rhs) -> np.ndarray:
    """Solve ``(lam I - K*) phi = rhs`` for a mean-zero ``rhs``.

    ``rhs`` may be one vector or an (n, k) block of columns. The system is
    bordered with the constraint ``sum w_i phi_i = 0``, which keeps it
    nonsingular at ``lam = 1/2`` where ``lam I - K*`` has the equilibrium
    density in its kernel.
    """
    contrast = _as_contrast(contrast)
    rhs = np.asarray(rhs)
    single = rhs.ndim == 1
    R = rhs[:, None] if single else rhs
    n = disc.n
    if R.shape[0] != n:
        raise ValueError(f"rhs has {R.shape[0]} rows, expected {n}")
    w = disc.weights
    scale = np.linalg.norm(R, axis=0) * np.sqrt(np.sum(w * w))
    mean = np.abs(w @ R)
    bad = mean > 1e-8 * np.maximum(scale, np.finfo(float).tiny)
    if np.any(bad):
        raise ValueError("rhs must have zero weighted mean")

    A = np.zeros((n + 1, n + 1))
    A[:n, :n] = -disc.kstar
    A[np.arange(n), np.arange(n)] += contrast.lam
    A[:n, n] = 1.0
    A[n, :n] = w
    B = np.zeros((n + 1, R.shape[1]), dtype=np.result_type(R, float))
    B[:n] = R
    sol = sla.lu_solve(sla.lu_factor(A, check_finite=False), B, check_finite=False)
    phi = sol[:n]
    return phi[:, 0] if single else phi


def single_layer(frame: BoundaryFrame, density, z):
    """Single-layer potential ``(1/2pi) int log|z - y| phi(y) dsigma(y)``.

    Plain trapezoidal rule: accurate only a few node spacings away from
    the boundary.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if kernels.min_distance(z_arr.ravel(), frame.points) < 1e-12 * frame.arclength:
        raise DomainError("evaluation point lies on the boundary")
    out = kernels.single_layer(frame.points, frame.weights, np.asarray(density), z_arr)
    return out.reshape(np.shape(z)) if np.ndim(z) else out.ravel()[0]

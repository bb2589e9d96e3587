"""Generalized polarization tensors (GPTs) and their Faber-basis analogues
(FPTs): forward computation by boundary integrals, closed-form evaluation
from Grunsky coefficients, basis changes, and far-field series."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla

from .conformal import BoundaryFrame, ExteriorMap, FaberTable, grunsky
from .errors import DomainError, TruncationError
from .potential import Contrast, _as_contrast, assemble, solve_density

__all__ = [
    "GptMatrix",
    "FptMatrix",
    "SeriesSolver",
    "gpt_forward",
    "fpt_analytic",
    "series_solver",
    "fpt_from_gpt",
    "gpt_from_fpt",
    "multipole_field",
    "geometric_multipole_field",
    "add_noise",
    "symmetry_residuals",
]


@dataclass(frozen=True, eq=False)
class GptMatrix:
    """``N1[m-1, n-1]`` and ``N2[m-1, n-1]`` for 1 <= m, n <= order."""

    order: int
    N1: np.ndarray
    N2: np.ndarray
    lam: float

    def truncated(self, M: int) -> "GptMatrix":
        if M > self.order:
            raise ValueError(f"order {self.order} < requested {M}")
        return GptMatrix(M, self.N1[:M, :M].copy(), self.N2[:M, :M].copy(), self.lam)


@dataclass(frozen=True, eq=False)
class FptMatrix:
    order: int
    F1: np.ndarray
    F2: np.ndarray
    lam: float
    basis_map: ExteriorMap | None = None
    # max relative change when the finite section is doubled (analytic path)
    truncation_delta: float | None = None


@dataclass(frozen=True, eq=False)
class SeriesSolver:
    """Finite sections of the matrices A, B expanding the resolvent on the
    density basis ``zeta_k``."""

    order: int
    A: np.ndarray
    B: np.ndarray


def symmetry_residuals(gpt: GptMatrix) -> tuple[float, float]:
    """Relative departures of N1 from symmetric and N2 from Hermitian.

    N1 vanishes for disks; when it is zero to rounding against N2, its
    residual is measured relative to N2 instead.
    """
    n1, n2 = np.linalg.norm(gpt.N1), np.linalg.norm(gpt.N2)
    s1 = n1 if n1 > 1e-10 * n2 else n2
    def rel(d, s):
        return float(np.linalg.norm(d) / s) if s > 0 else float(np.linalg.norm(d))
    return rel(gpt.N1 - gpt.N1.T, s1), rel(gpt.N2 - gpt.N2.conj().T, n2)


def gpt_forward(frame: BoundaryFrame, contrast, M: int, disc=None) -> GptMatrix:
    """GPTs of the inclusion bounded by ``frame`` by Nystrom quadrature.

    For each m the densities for ``d(z^m)/dnu = m z^{m-1} nu`` and its
    conjugate are solved in one factorization; the conjugate density is the
    complex conjugate of the first since K* is real.
    """
    contrast = _as_contrast(contrast)
    if frame.n < 8 * M:
        raise ValueError(f"need at least {8 * M} boundary samples for order {M}")
    disc = assemble(frame) if disc is None else disc
    z, nu, w = frame.points, frame.normal, frame.weights
    powers = z[:, None] ** np.arange(M + 1)[None, :]
    m = np.arange(1, M + 1)
    rhs = m[None, :] * powers[:, :M] * nu[:, None]
    phi = solve_density(disc, contrast, rhs)
    test = powers[:, 1:] * w[:, None]
    N1 = phi.T @ test
    N2 = phi.conj().T @ test
    return GptMatrix(M, N1, N2, contrast.lam)


def _section(map: ExteriorMap, K: int):
    G = grunsky(map, K)
    idx = np.arange(1, K + 1)
    g2 = map.gamma ** (-2.0 * idx)
    # 4 lam^2 I - gamma^{-2N} conj(C) gamma^{-2N} C, without the 4 lam^2 I
    T = (g2[:, None] * G.c.conj()) @ (g2[:, None] * G.c)
    return G, idx, T


def series_solver(map: ExteriorMap, contrast, K_tr: int) -> SeriesSolver:
    """Finite-section A and B matrices:

    A = 8 lam gamma^{2N} (4 lam^2 I - gamma^{-2N} C gamma^{-2N} conj C)^-1
    B = 4 C (4 lam^2 I - gamma^{-2N} conj C gamma^{-2N} C)^-1
    """
    lam = _as_contrast(contrast).lam
    G, idx, T = _section(map, K_tr)
    C = G.c
    g2 = map.gamma ** (-2.0 * idx)
    T2 = (g2[:, None] * C) @ (g2[:, None] * C.conj())
    eye = np.eye(K_tr)
    A = 8 * lam * (map.gamma ** (2.0 * idx))[:, None] * np.linalg.inv(4 * lam**2 * eye - T2)
    B = 4 * C @ np.linalg.inv(4 * lam**2 * eye - T)
    return SeriesSolver(K_tr, A, B)


def _fpt_section(map: ExteriorMap, lam: float, M: int, K: int):
    G, idx, T = _section(map, K)
    if G.norm() >= 2 * abs(lam) * (1 - 1e-12):
        raise TruncationError(
            f"finite-section Grunsky norm {G.norm():.6g} reaches 2|lambda|; "
            "the section is not invertible"
        )
    X = 4 * lam**2 * np.eye(K) - T
    Xinv = np.linalg.inv(X)
    C = G.c
    k = idx[None, :]
    gm = map.gamma ** (2.0 * idx)[:, None]
    f = 1 - 4 * lam**2
    F1 = 4 * np.pi * k * C + 4 * np.pi * k * f * (C @ Xinv)
    F2 = 8 * np.pi * k * lam * gm * np.eye(K) + 8 * np.pi * k * lam * gm * f * Xinv
    return F1[:M, :M], F2[:M, :M]


def fpt_analytic(map: ExteriorMap, contrast, M: int, K_tr: int | None = None) -> FptMatrix:
    """FPTs from the Grunsky matrix, with the infinite matrices cut at ``K_tr``.

    The result is recomputed at ``2 K_tr``; the relative change is stored in
    ``truncation_delta`` (the returned values come from the larger section).
    """
    lam = _as_contrast(contrast).lam
    if K_tr is None:
        K_tr = max(4 * M, M + 16)
    if K_tr < M:
        raise ValueError("truncation must be at least the order")
    F1a, F2a = _fpt_section(map, lam, M, K_tr)
    F1b, F2b = _fpt_section(map, lam, M, 2 * K_tr)
    scale = max(np.abs(F1b).max(), np.abs(F2b).max())
    delta = max(np.abs(F1a - F1b).max(), np.abs(F2a - F2b).max()) / scale
    return FptMatrix(M, F1b, F2b, lam, map, float(delta))


def _p_block(faber: FaberTable, M: int) -> np.ndarray:
    if faber.order < M:
        raise ValueError(f"Faber table order {faber.order} < tensor order {M}")
    return faber.matrix(M)


def fpt_from_gpt(gpt: GptMatrix, faber: FaberTable) -> FptMatrix:
    """``F1 = P N1 P^T`` and ``F2 = conj(P) N2 P^T`` with P the Faber block."""
    P = _p_block(faber, gpt.order)
    F1 = P @ gpt.N1 @ P.T
    F2 = P.conj() @ gpt.N2 @ P.T
    return FptMatrix(gpt.order, F1, F2, gpt.lam)


def gpt_from_fpt(fpt: FptMatrix, faber: FaberTable) -> GptMatrix:
    """Inverse of :func:`fpt_from_gpt` by unit-triangular solves."""
    P = _p_block(faber, fpt.order)

    def sandwich(L, F):
        # L^{-1} F P^{-T}
        left = sla.solve_triangular(L, F, lower=True, unit_diagonal=True)
        return sla.solve_triangular(P, left.T, lower=True, unit_diagonal=True).T

    return GptMatrix(fpt.order, sandwich(P, fpt.F1), sandwich(P.conj(), fpt.F2), fpt.lam)


def multipole_field(gpt: GptMatrix, alpha, z) -> np.ndarray:
    """Far-field perturbation ``u - H`` for ``H = sum_m alpha_m z^m + c.c.``.

    Returns ``-2 Re sum_{m,n} (alpha_m N1_mn + conj(alpha_m) N2_mn) z^{-n} / (4 pi n)``.
    """
    alpha = np.zeros(gpt.order, dtype=complex) if alpha is None else np.asarray(alpha, dtype=complex)
    M = min(len(alpha), gpt.order)
    coef = alpha[:M] @ gpt.N1[:M] + alpha[:M].conj() @ gpt.N2[:M]
    n = np.arange(1, gpt.order + 1)
    z = np.asarray(z, dtype=complex)
    series = np.sum(coef / (4 * np.pi * n) * z[..., None] ** (-n), axis=-1)
    return -2 * series.real


def geometric_multipole_field(fpt: FptMatrix, map: ExteriorMap, beta, w) -> np.ndarray:
    """Perturbation ``u - H`` at ``z = Psi(w)`` from FPTs, valid for |w| > gamma,
    for ``H = sum_m beta_m F_m + c.c.``."""
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(w) <= map.gamma):
        raise DomainError("geometric multipole series needs |w| > gamma")
    beta = np.asarray(beta, dtype=complex)
    M = min(len(beta), fpt.order)
    coef = beta[:M] @ fpt.F1[:M] + beta[:M].conj() @ fpt.F2[:M]
    n = np.arange(1, fpt.order + 1)
    series = np.sum(coef / (4 * np.pi * n) * w[..., None] ** (-n), axis=-1)
    return -2 * series.real


def add_noise(gpt: GptMatrix, snr: float, seed: int, mode: str = "relative") -> GptMatrix:
    """Gaussian noise at ``Var = 10**(-snr/10)``.

    ``relative``: each entry's real and imaginary parts get variance
    ``Var * |entry|**2``; ``absolute``: variance ``Var``. N1 is then
    re-symmetrized and N2 re-Hermitized. ``snr = inf`` returns the input.
    """
    if np.isinf(snr) and snr > 0:
        return gpt
    if mode not in ("relative", "absolute"):
        raise ValueError(f"unknown noise mode {mode!r}")
    var = 10.0 ** (-snr / 10.0)
    rng = np.random.default_rng(seed)

    def noisy(X):
        std = np.sqrt(var) * (np.abs(X) if mode == "relative" else np.ones(X.shape))
        return X + std * rng.standard_normal(X.shape) + 1j * std * rng.standard_normal(X.shape)

    N1 = noisy(gpt.N1)
    N2 = noisy(gpt.N2)
    return replace(gpt, N1=(N1 + N1.T) / 2, N2=(N2 + N2.conj().T) / 2)

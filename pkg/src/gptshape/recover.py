"""Analytic shape recovery from GPTs.

Three non-iterative methods:

* perturbed disk: a base disk from N2_11 plus Fourier modes of a normal
  displacement read off the first GPT column;
* conformal: the exterior map coefficients by induction on the order,
  exact for perfectly conducting or insulating inclusions;
* perturbed equivalent ellipse: the ellipse matching the first-order GPTs
  plus Fourier modes of a displacement along ``w - e1/w``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conformal import ExteriorMap, faber_table
from .errors import DegenerateError, ShapeError
from .potential import Contrast, _as_contrast
from .tensors import GptMatrix, fpt_analytic, fpt_from_gpt

__all__ = [
    "EllipseParams",
    "PerturbationResult",
    "StCoefficients",
    "recover_disk",
    "recover_disk_fplus",
    "recover_conformal",
    "equivalent_ellipse",
    "modified_gpt_delta",
    "st_coefficients",
    "recover_ellipse_perturbation",
    "map_curve",
    "FORMULAS",
]


@dataclass(frozen=True)
class EllipseParams:
    """Ellipse ``w + e0 + e1/w`` on ``|w| = gamma_e``; ``e1 = 0`` is a disk."""

    gamma_e: float
    e0: complex = 0j
    e1: complex = 0j

    def __post_init__(self):
        if not self.gamma_e > 0:
            raise DegenerateError(f"conformal radius must be positive, got {self.gamma_e}")
        if abs(self.e1) >= self.gamma_e**2:
            raise ShapeError(
                f"|e1| = {abs(self.e1):.6g} >= gamma_e^2 = {self.gamma_e**2:.6g}: "
                "ellipse map is not univalent"
            )

    def to_map(self) -> ExteriorMap:
        return ExteriorMap(self.gamma_e, self.e0, [self.e1] if self.e1 != 0 else [])


@dataclass(frozen=True, eq=False)
class PerturbationResult:
    """Base ellipse (or disk) plus the recovered products ``eps * fhat_k``.

    ``fhat[k]`` is the k-th Fourier coefficient, k = 0..len-1. For the
    ellipse method the boundary is

        w + e0 + e1/w + (w - e1/w) * 2 Re(sum_k fhat_k e^{ik theta}),  |w| = gamma_e;

    for the disk method the displacement is along the normal with length
    ``2 Re(sum_k fhat_k e^{ik theta})``.
    """

    base: EllipseParams
    fhat: np.ndarray
    method: str

    def displacement(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(len(self.fhat))
        return 2 * np.real(np.exp(1j * theta[..., None] * k) @ self.fhat)

    def curve(self, n: int = 512) -> tuple[np.ndarray, np.ndarray]:
        """``(theta, z)`` with n uniform samples of the reconstructed boundary."""
        theta = 2 * np.pi * np.arange(n) / n
        b = self.base
        u = np.exp(1j * theta)
        f = self.displacement(theta)
        if self.method == "disk":
            return theta, b.e0 + (b.gamma_e + f) * u
        w = b.gamma_e * u
        return theta, w + b.e0 + b.e1 / w + (w - b.e1 / w) * f


@dataclass(frozen=True, eq=False)
class StCoefficients:
    """``s[m-1]`` and ``t[m-1]`` for m = 1..M."""

    s: np.ndarray
    t: np.ndarray


def map_curve(map: ExteriorMap, n: int = 512) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n) / n
    return theta, map(map.gamma * np.exp(1j * theta))


def _n2_11(gpt: GptMatrix) -> float:
    v = gpt.N2[0, 0].real
    if not np.isfinite(v) or abs(v) == 0:
        raise DegenerateError("N2_11 vanishes: no inclusion to recover")
    return v


def _check_order(gpt: GptMatrix, M: int, need: int):
    if M < 1:
        raise ValueError("order must be >= 1")
    if gpt.order < need:
        raise ValueError(f"GPT order {gpt.order} is too small; need {need}")


def _center(gpt: GptMatrix) -> complex:
    if gpt.order < 2:
        return 0j
    return complex(gpt.N2[0, 1] / (2 * _n2_11(gpt)))


def _recentered(gpt: GptMatrix, c: complex) -> GptMatrix:
    """GPTs of the inclusion translated by ``-c``.

    The Faber polynomials of ``w + c`` are ``(z - c)^m``, so the FPTs in that
    basis are the GPTs in coordinates centred at c.
    """
    if c == 0:
        return gpt
    fpt = fpt_from_gpt(gpt, faber_table(ExteriorMap(1.0, c), gpt.order))
    return GptMatrix(gpt.order, fpt.F1, fpt.F2, gpt.lam)


def _disk_radius(gpt: GptMatrix, lam: float) -> float:
    r2 = lam * _n2_11(gpt) / (2 * np.pi)
    if not r2 > 0:
        raise DegenerateError(f"base disk has non-positive squared radius {r2:.6g}")
    return float(np.sqrt(r2))


def _sigma_ratio(contrast: Contrast, g2: float, sign: int) -> float:
    """``(sigma + 1) / (sigma + sign * g2)`` including sigma = inf."""
    if np.isinf(contrast.sigma):
        return 1.0
    return (contrast.sigma + 1) / (contrast.sigma + sign * g2)


def recover_disk(gpt: GptMatrix, contrast, M: int, formula: str = "closed") -> PerturbationResult:
    """Perturbed-disk recovery from the first column of N2.

    Base radius ``gamma_D^2 = lam N2_11 / 2pi``, then for m = k + 1

        eps fhat_k = lam^2 (sigma - 1) / (2 pi m gamma_D^(m-1) (sigma + gamma_D^2))
                     * (N2_m1 - N2_m1(disk)),

    where the disk reference vanishes off the diagonal. If the centre
    ``N2_12 / (2 N2_11)`` is nonzero the GPTs are first re-expressed around it.

    That prefactor agrees with a first-order expansion only for gamma_D = 1;
    ``formula="system"`` uses ``lam / (4 pi m gamma_D^m)``, which is correct
    for every radius (the two differ by ``(sigma + 1) gamma_D / (sigma + gamma_D^2)``).
    """
    if formula not in FORMULAS:
        raise ValueError(f"formula must be one of {FORMULAS}")
    contrast = _as_contrast(contrast)
    _check_order(gpt, M, M)
    lam = contrast.lam
    c = _center(gpt)
    g = _recentered(gpt.truncated(M), c)
    r = _disk_radius(g, lam)
    m = np.arange(1, M + 1)
    ref = np.zeros(M, dtype=complex)
    ref[0] = 2 * np.pi * r**2 / lam
    delta = g.N2[:, 0] - ref
    # lam^2 (sigma - 1) = lam (sigma + 1) / 2 keeps sigma = inf finite
    if formula == "system":
        pref = lam / (4 * np.pi * m * r**m)
    else:
        pref = lam * _sigma_ratio(contrast, r**2, +1) / (4 * np.pi * m * r ** (m - 1))
    fhat = pref * delta
    fhat[0] = 0.0
    return PerturbationResult(EllipseParams(r, c, 0j), fhat, "disk")


def recover_disk_fplus(gpt: GptMatrix, contrast, M: int, threshold: float = 0.1) -> np.ndarray:
    """High modes ``eps fhat_{m+1}``, m = 1..M, from the N1 column.

        eps fhat_{m+1} = lam^2 (sigma - 1) / (2 pi m gamma_D^(m-1) (sigma - gamma_D^2))
                         * conj(N1_m1 - N1_m1(disk))

    Returns an array indexed by mode k = 0..M+1 (entries 0 and 1 are zero).
    Refuses when ``|sigma - gamma_D^2| <= threshold * max(sigma, gamma_D^2)``.
    """
    contrast = _as_contrast(contrast)
    _check_order(gpt, M, M)
    lam = contrast.lam
    c = _center(gpt)
    g = _recentered(gpt.truncated(M), c)
    r = _disk_radius(g, lam)
    sigma = contrast.sigma
    if not np.isinf(sigma) and abs(sigma - r**2) <= threshold * max(sigma, r**2):
        raise DegenerateError(
            f"|sigma - gamma_D^2| = {abs(sigma - r**2):.3g} is too small for the N1 channel"
        )
    m = np.arange(1, M + 1)
    pref = lam * _sigma_ratio(contrast, r**2, -1) / (4 * np.pi * m * r ** (m - 1))
    out = np.zeros(M + 2, dtype=complex)
    # a centred disk has N1 = 0, so the reference subtraction drops out
    out[2:] = pref * np.conj(g.N1[:, 0])
    return out


def recover_conformal(gpt: GptMatrix, contrast, M: int) -> ExteriorMap:
    """Exterior map ``w + a0 + a1/w + ... + aM/w^M`` from the GPTs.

    ``gamma^2 = N2_11 / (8 pi lam)``, ``a0 = N2_12 / (2 N2_11)`` and, with the
    Faber row m built from a0..a_{m-1},
    ``a_m = (1/4 pi m) sum_n p_mn N1_n1``. Exact at lam = +-1/2.
    """
    lam = _as_contrast(contrast).lam
    _check_order(gpt, M, M)
    n211 = _n2_11(gpt)
    g2 = n211 / (8 * np.pi * lam)
    if not g2 > 0:
        raise DegenerateError(f"recovered gamma^2 = {g2:.6g} is not positive")
    gamma = float(np.sqrt(g2))
    a0 = _center(gpt)
    coeffs = np.zeros(M, dtype=complex)
    for m in range(1, M + 1):
        p = faber_table(ExteriorMap(gamma, a0, coeffs[: m - 1]), m).p
        coeffs[m - 1] = np.dot(p[m, 1 : m + 1], gpt.N1[:m, 0]) / (4 * np.pi * m)
    return ExteriorMap(gamma, a0, coeffs)


def equivalent_ellipse(gpt: GptMatrix, contrast, tol: float = 1e-8) -> EllipseParams:
    """The ellipse whose N1_11, N2_11 and N2_21 match the input."""
    lam = _as_contrast(contrast).lam
    n2 = _n2_11(gpt)
    n1 = complex(gpt.N1[0, 0])
    a2, b2 = n2 * n2, abs(n1) ** 2
    den = a2 - 4 * lam**2 * b2
    if den < tol * a2:
        raise DegenerateError(
            "|N2_11|^2 - 4 lam^2 |N1_11|^2 is (nearly) zero: no equivalent ellipse"
        )
    g2 = lam * n2 / (2 * np.pi) * (a2 - b2) / den
    if not g2 > 0:
        raise DegenerateError(f"equivalent ellipse has gamma_e^2 = {g2:.6g}")
    e0 = _center(gpt)
    e1 = 2 * lam * g2 * n1 / n2
    return EllipseParams(float(np.sqrt(g2)), e0, complex(e1))


def modified_gpt_delta(gpt: GptMatrix, ellipse: EllipseParams, M: int, contrast=None):
    """First columns of the GPT differences in the ellipse's Faber basis.

    ``D1_m1 = sum_n p_mn N1_n1`` and ``D2_m1 = sum_n conj(p_mn) N2_n1``
    minus the ellipse's own (diagonal) FPTs, which only touch m = 1. When
    ``contrast`` is omitted the GPT's own lambda is used.
    """
    if M < 2:
        raise ValueError("order must be >= 2")
    _check_order(gpt, M, M)
    lam = gpt.lam if contrast is None else _as_contrast(contrast).lam
    P = faber_table(ellipse.to_map(), M).matrix(M)
    d1 = P @ gpt.N1[:M, 0]
    d2 = P.conj() @ gpt.N2[:M, 0]
    ref = fpt_analytic(ellipse.to_map(), lam, 1, K_tr=4)
    d1[0] -= ref.F1[0, 0]
    d2[0] -= ref.F2[0, 0]
    return d1, d2


def st_coefficients(ellipse: EllipseParams, contrast, M: int) -> StCoefficients:
    """``s_m = (lam g^2m - |e1|^2m / (2 g^2m)) / (g^4m - |e1|^2m)`` and
    ``t_m = e1^m (lam - 1/2) / (g^4m - |e1|^2m)`` for m = 1..M."""
    lam = _as_contrast(contrast).lam
    m = np.arange(1, M + 1)
    g2m = ellipse.gamma_e ** (2.0 * m)
    e2m = abs(ellipse.e1) ** (2.0 * m)
    den = g2m * g2m - e2m
    s = (lam * g2m - e2m / (2 * g2m)) / den
    t = complex(ellipse.e1) ** m * (lam - 0.5) / den
    return StCoefficients(s, t)


def _tangential_coefficients(ellipse: EllipseParams, lam: float, M: int):
    """Coefficients of the tangential derivative of the interior solution
    for ``H = F_m[E]``: ``p_m e^{im theta} - r_m e^{-im theta}`` with

        p_m = (lam g^2m + |e1|^2m / (2 g^2m)) / (g^4m - |e1|^2m)
        r_m = e1^m (lam + 1/2) / (g^4m - |e1|^2m)

    (they reduce to s_m, t_m when e1 = 0 or lam = 1/2), and the factor d_m.
    """
    m = np.arange(1, M + 1)
    g2m = ellipse.gamma_e ** (2.0 * m)
    e2m = abs(ellipse.e1) ** (2.0 * m)
    den = g2m * g2m - e2m
    p = (lam * g2m + e2m / (2 * g2m)) / den
    r = complex(ellipse.e1) ** m * (lam + 0.5) / den
    d = den / (lam**2 - e2m / (4 * g2m * g2m))
    return p, r, d


def _solve_first_order(E, lam, st, d1, d2, m, n=1):
    """Solve the linearized relations between (D1_mn, D2_mn) and the
    Fourier coefficients X = eps fhat_{m-n}, Y = eps fhat_{m+n}.

    Uses the normal derivatives (s, t) and the tangential ones (p, r);
    returns (X, Y).
    """
    p, r, d = _tangential_coefficients(E, lam, max(m, n))
    s, t = st.s, st.t
    i, j = m - 1, n - 1
    sm, sn, tm, tn = s[i], s[j], t[i], t[j]
    pm, pn, rm, rn = p[i], p[j], r[i], r[j]
    K = 2 * np.pi * m * n * d[i] * d[j] / E.gamma_e ** (m + n)
    a, b = lam + 0.5, lam - 0.5
    # unknowns ordered (X, conj X, Y, conj Y)
    row1 = K * np.array(
        [
            -a * tm * sn + b * rm * pn,
            -a * sm * tn + b * pm * rn,
            a * tm * tn - b * rm * rn,
            a * sm * sn - b * pm * pn,
        ]
    )
    ctm, crm = np.conj(tm), np.conj(rm)
    row2 = K * np.array(
        [
            a * sm * sn + b * pm * pn,
            a * ctm * tn + b * crm * rn,
            -(a * sm * tn + b * pm * rn),
            -(a * ctm * sn + b * crm * pn),
        ]
    )

    def conj_row(row):
        return np.conj(row)[[1, 0, 3, 2]]

    A = np.array([row1, conj_row(row1), row2, conj_row(row2)])
    rhs = np.array([d1, np.conj(d1), d2, np.conj(d2)])
    sol = np.linalg.solve(A, rhs)
    return sol[0], sol[2]


FORMULAS = ("closed", "system")


def recover_ellipse_perturbation(
    gpt: GptMatrix, contrast, M: int, formula: str = "closed"
) -> PerturbationResult:
    """Perturbed equivalent-ellipse recovery using the n = 1 GPT column.

    ``formula="closed"`` evaluates, for k = 1..M-1 and m = k + 1,

        eps fhat_k = g^(m+1) / (4 pi lam m) * (s_1 conj(t_m) D1 + s_m t_1 conj(D1)
                                               + s_m s_1 D2 + conj(t_m) t_1 conj(D2))

    with ``D1 = D1_m1``, ``D2 = D2_m1``. That expression assumes the
    tangential derivative of the interior field carries the same
    coefficients (s, t) as the normal one, which only holds for e1 = 0 or
    lam = 1/2; elsewhere its error is first order in the perturbation.
    ``formula="system"`` solves the linearized 4 x 4 relations with the
    exact tangential coefficients instead. ``fhat_0`` is left at 0.
    """
    if formula not in FORMULAS:
        raise ValueError(f"formula must be one of {FORMULAS}")
    contrast = _as_contrast(contrast)
    lam = contrast.lam
    _check_order(gpt, M, M)
    E = equivalent_ellipse(gpt, contrast)
    d1, d2 = modified_gpt_delta(gpt, E, M, contrast)
    st = st_coefficients(E, contrast, M)
    s, t = st.s, st.t
    fhat = np.zeros(M, dtype=complex)
    for k in range(1, M):
        m = k + 1
        i = m - 1
        if formula == "system":
            fhat[k] = _solve_first_order(E, lam, st, d1[i], d2[i], m)[0]
            continue
        ct = np.conj(t[i])
        val = (
            s[0] * ct * d1[i]
            + s[i] * t[0] * np.conj(d1[i])
            + s[i] * s[0] * d2[i]
            + ct * t[0] * np.conj(d2[i])
        )
        fhat[k] = E.gamma_e ** (m + 1) / (4 * np.pi * lam * m) * val
    return PerturbationResult(E, fhat, "ellipse")

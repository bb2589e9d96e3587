"""Independent reference computations shared by several test modules."""

import numpy as np
from scipy.integrate import quad
from scipy.optimize import newton


def perimeter(dz, pieces=((0.0, 2 * np.pi),)):
    """Arclength by adaptive quadrature of |z'(t)| over the given pieces."""
    return sum(quad(lambda t: abs(dz(t)), a, b, limit=200, epsabs=1e-13, epsrel=1e-13)[0] for a, b in pieces)


def normal_projection(curve, gamma, e0, e1, n=256):
    """Fourier coefficients of f where the curve is w + e0 + e1/w + (w - e1/w) f(theta).

    For each theta the true curve is intersected with the normal line of
    the ellipse through Psi_E(gamma e^{i theta}); ``curve`` is a vectorized
    parametrization close to the ellipse parameter.
    """
    th = 2 * np.pi * np.arange(n) / n
    w = gamma * np.exp(1j * th)
    base = w + e0 + e1 / w
    d = w - e1 / w
    nu = d / abs(d)

    def g(t):
        return np.imag((curve(t) - base) * np.conj(nu))

    def dg(t):
        return (g(t + 1e-6) - g(t - 1e-6)) / 2e-6

    t = newton(g, th, fprime=dg, tol=1e-14, maxiter=50)
    s = np.real((curve(t) - base) * np.conj(nu))
    return np.fft.fft(s / abs(d)) / n


def grunsky_fft(fm, M, rho=1.5, n=512):
    """c_mk read off FFT samples of F_m(Psi(w)) on |w| = rho * gamma, with F_m
    fitted directly to powers of Psi (no recursion)."""
    from numpy.polynomial import polynomial as P

    r = rho * fm.gamma
    th = 2 * np.pi * np.arange(n) / n
    w = r * np.exp(1j * th)
    z = fm(w)
    c = np.zeros((M, M), dtype=complex)
    for m in range(1, M + 1):
        # F_m is the monic polynomial whose composition with Psi has no
        # nonnegative powers of w other than w^m; solve for its coefficients
        V = np.column_stack([z**j for j in range(m + 1)])
        coef = np.fft.fft(V, axis=0) / n  # Laurent coeffs of z^j(Psi(w)) in w
        k = np.fft.fftfreq(n, 1 / n).astype(int)
        keep = (k >= 0) & (k <= m)
        A = coef[keep] / (r ** k[keep])[:, None]
        target = (k[keep] == m).astype(complex)
        p = np.linalg.solve(A[np.argsort(k[keep])], target[np.argsort(k[keep])])
        Fm = V @ p
        fk = np.fft.fft(Fm) / n
        for kk in range(1, M + 1):
            c[m - 1, kk - 1] = fk[-kk] * r**kk
    return c

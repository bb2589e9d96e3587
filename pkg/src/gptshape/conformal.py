"""Exterior conformal maps, Faber polynomials, Grunsky coefficients, and
the boundary curves used throughout the package.

A map is stored in the normalized Laurent form

    Psi(w) = w + a0 + a1/w + a2/w**2 + ... + aK/w**K,   |w| >= gamma,

and every coefficient past the stored tail is exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import LinearRing

from .errors import DomainError, ShapeError

__all__ = [
    "ExteriorMap",
    "FaberTable",
    "GrunskyMatrix",
    "BoundaryFrame",
    "ShapeSpec",
    "eval_map",
    "faber_table",
    "grunsky",
    "boundary_frame",
    "curve",
    "disk",
    "ellipse",
    "from_map",
    "asymmetric",
    "kite",
    "straight",
    "crescent",
    "catalog",
    "CATALOG_NAMES",
]


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ExteriorMap:
    """Truncated exterior conformal map ``w + a0 + sum_k coeffs[k-1] w**-k``."""

    gamma: float
    a0: complex = 0j
    coeffs: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))

    def __post_init__(self):
        if not np.isfinite(self.gamma) or self.gamma <= 0:
            raise ValueError(f"conformal radius must be positive, got {self.gamma}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "a0", complex(self.a0))
        object.__setattr__(self, "coeffs", _frozen(np.atleast_1d(self.coeffs)).ravel())

    @property
    def tail_length(self) -> int:
        return len(self.coeffs)

    def coefficient(self, k: int) -> complex:
        """Laurent coefficient a_k (a_0 for k=0); zero beyond the stored tail."""
        if k == 0:
            return self.a0
        if 1 <= k <= len(self.coeffs):
            return complex(self.coeffs[k - 1])
        return 0j

    def laurent(self, K: int) -> np.ndarray:
        """Array ``[a_0, a_1, ..., a_K]`` padded with zeros."""
        out = np.zeros(K + 1, dtype=complex)
        out[0] = self.a0
        n = min(K, len(self.coeffs))
        out[1 : n + 1] = self.coeffs[:n]
        return out

    def __call__(self, w):
        w = np.asarray(w, dtype=complex)
        out = w + self.a0
        inv = 1.0 / w
        acc = np.ones_like(w)
        for a in self.coeffs:
            acc = acc * inv
            out = out + a * acc
        return out

    def derivative(self, w, order: int = 1):
        """First or second derivative of the map in ``w``."""
        w = np.asarray(w, dtype=complex)
        if order == 1:
            out = np.ones_like(w)
            for k, a in enumerate(self.coeffs, start=1):
                out = out - k * a * w ** (-k - 1)
            return out
        if order == 2:
            out = np.zeros_like(w)
            for k, a in enumerate(self.coeffs, start=1):
                out = out + k * (k + 1) * a * w ** (-k - 2)
            return out
        raise ValueError("only first and second derivatives are supported")

    def shifted(self, shift: complex) -> "ExteriorMap":
        return ExteriorMap(self.gamma, self.a0 + shift, self.coeffs)

    def __repr__(self):
        return f"ExteriorMap(gamma={self.gamma!r}, a0={self.a0!r}, coeffs={list(self.coeffs)!r})"


def eval_map(map: ExteriorMap, w):
    """Evaluate the map at ``w``; points inside the disk |w| < gamma are rejected."""
    w_arr = np.asarray(w, dtype=complex)
    if np.any(np.abs(w_arr) < map.gamma * (1 - 1e-12)):
        raise DomainError(f"|w| must be >= gamma = {map.gamma}")
    out = map(w_arr)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class FaberTable:
    """Coefficients ``p[m, n]`` of ``F_m(z) = sum_n p[m, n] z**n`` for m <= order."""

    order: int
    p: np.ndarray

    def matrix(self, M: int | None = None) -> np.ndarray:
        """Unit lower-triangular block ``[p_mn]`` for ``1 <= m, n <= M``."""
        M = self.order if M is None else M
        if M > self.order:
            raise ValueError(f"table has order {self.order} < {M}")
        return np.array(self.p[1 : M + 1, 1 : M + 1])

    def evaluate(self, m: int, z):
        # numpy polyval wants the highest power first
        return np.polyval(self.p[m, m::-1], np.asarray(z, dtype=complex))


def faber_table(map: ExteriorMap, M: int) -> FaberTable:
    """Faber polynomial coefficients of ``map`` up to degree ``M``.

    Uses ``F_{m+1} = z F_m - m a_m - sum_{k=0}^m a_k F_{m-k}`` on coefficient
    rows, so row m depends only on ``a_0..a_{m-1}``.
    """
    if M < 1:
        raise ValueError("order must be >= 1")
    a = map.laurent(M)
    p = np.zeros((M + 1, M + 1), dtype=complex)
    p[0, 0] = 1.0
    for m in range(M):
        row = np.zeros(M + 1, dtype=complex)
        row[1 : m + 2] = p[m, : m + 1]
        row[0] -= m * a[m]
        for k in range(m + 1):
            row -= a[k] * p[m - k]
        p[m + 1] = row
    p.setflags(write=False)
    return FaberTable(M, p)


@dataclass(frozen=True, eq=False)
class GrunskyMatrix:
    order: int
    c: np.ndarray
    g: np.ndarray
    gamma: float

    def norm(self) -> float:
        """Spectral norm of the finite section of the symmetrized matrix."""
        return float(np.linalg.norm(self.g, 2))


def grunsky(map: ExteriorMap, M: int, buffer: int | None = None) -> GrunskyMatrix:
    """Grunsky coefficients ``c_mk`` (1 <= m, k <= M) and their symmetrization.

    The column recursion

        c_{m,k+1} = c_{m+1,k} - a_{m+k} + sum_{s<m} a_{m-s} c_{sk} - sum_{s<k} a_{k-s} c_{ms}

    reaches one row further down per column, so the first column is seeded
    with ``M + buffer`` rows (``c_{m1} = m a_m``); any ``buffer >= M - 1``
    makes the top-left M x M block exact.
    """
    if M < 1:
        raise ValueError("order must be >= 1")
    if buffer is None:
        buffer = max(M - 1, map.tail_length)
    if buffer < M - 1:
        raise ValueError("buffer must be at least M - 1")
    rows = M + buffer
    a = map.laurent(2 * rows + 1)
    c = np.zeros((rows + 2, M + 1), dtype=complex)
    for m in range(1, rows + 1):
        c[m, 1] = m * a[m]
    for k in range(1, M):
        for m in range(1, rows - k + 1):
            val = c[m + 1, k] - a[m + k]
            for s in range(1, m):
                val += a[m - s] * c[s, k]
            for s in range(1, k):
                val -= a[k - s] * c[m, s]
            c[m, k + 1] = val
    cm = np.array(c[1 : M + 1, 1 : M + 1])
    idx = np.arange(1, M + 1)
    scale = np.sqrt(idx[None, :] / idx[:, None]) / map.gamma ** (idx[:, None] + idx[None, :])
    g = cm * scale
    cm.setflags(write=False)
    g.setflags(write=False)
    return GrunskyMatrix(M, cm, g, map.gamma)


# --------------------------------------------------------------------------
# Boundary curves


@dataclass(frozen=True, eq=False)
class BoundaryFrame:
    """Sampled counterclockwise boundary with differential geometry.

    ``theta`` is the uniform quadrature parameter; ``jacobian`` is
    ``|dz/dtheta|`` so ``weights = jacobian * 2*pi/n``. ``scale_factor`` is
    ``h = gamma |Psi'(gamma e^{i theta})|`` for map-defined shapes, else None.
    """

    n: int
    theta: np.ndarray
    points: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray
    jacobian: np.ndarray
    scale_factor: np.ndarray | None = None
    shape: "ShapeSpec | None" = None
    # points = anchors + offsets; for cornered curves the anchor is the
    # nearest corner so differences of nearby nodes keep full precision
    anchors: np.ndarray | None = None
    offsets: np.ndarray | None = None

    def differences(self) -> tuple[np.ndarray, np.ndarray]:
        if self.anchors is None:
            return np.zeros_like(self.points), self.points
        return self.anchors, self.offsets

    @property
    def weights(self) -> np.ndarray:
        return self.jacobian * (2 * np.pi / self.n)

    @property
    def arclength(self) -> float:
        return float(np.sum(self.weights))

    @property
    def max_spacing(self) -> float:
        return float(np.max(self.weights))


@dataclass(frozen=True, eq=False)
class ShapeSpec:
    """A boundary curve: ``kind`` is one of map, kite, straight, crescent,
    or curve (any smooth 2pi-periodic callable, differentiated spectrally)."""

    kind: str
    name: str
    params: tuple = ()
    exterior_map: ExteriorMap | None = None
    function: "object | None" = None

    def __post_init__(self):
        if self.kind not in _PARAMETRIC and self.kind not in ("map", "curve"):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if self.kind == "map" and self.exterior_map is None:
            raise ValueError("map shapes need an exterior map")
        if self.kind == "curve" and not callable(self.function):
            raise ValueError("curve shapes need a callable parametrization")

    def sample(self, t) -> np.ndarray:
        """Boundary points at parameter values ``t``."""
        if self.kind == "curve":
            return np.asarray(self.function(np.asarray(t, dtype=float)), dtype=complex)
        return self.parametrization(t)[0]

    @property
    def corners(self) -> tuple[float, ...]:
        return _PARAMETRIC[self.kind][1] if self.kind in _PARAMETRIC else ()

    def parametrization(self, t):
        """Position and first two derivatives at parameter values ``t``."""
        t = np.asarray(t, dtype=float)
        if self.kind == "map":
            fm = self.exterior_map
            w = fm.gamma * np.exp(1j * t)
            z = fm(w)
            d1 = fm.derivative(w)
            d2 = fm.derivative(w, 2)
            dz = 1j * w * d1
            d2z = -w * d1 - w * w * d2
            return z, dz, d2z
        if self.corners:
            side = _side_of(t)
            tc = np.asarray(_SQUARE_CORNERS)[side]
            anchor, offset, dz, d2z = _PARAMETRIC[self.kind][0](side, tc, t - tc)
            return anchor + offset, dz, d2z
        if self.kind == "curve":
            raise ValueError("curve shapes only provide samples; see boundary_frame")
        return _PARAMETRIC[self.kind][0](t)


def _kite(t):
    z = 0.311 + np.cos(t) - 0.7 * np.cos(2 * t) + 1j * np.sin(t)
    dz = -np.sin(t) + 1.4 * np.sin(2 * t) + 1j * np.cos(t)
    d2z = -np.cos(t) + 2.8 * np.cos(2 * t) - 1j * np.sin(t)
    return z, dz, d2z


_R2 = np.sqrt(2.0)


def square_formula(t):
    """Literal square-root form of the disk-to-square boundary map.

    Kept for reference: near the corners it takes square roots of values
    that are zero up to rounding, so it loses about half the digits there.
    """
    u, v = np.cos(t), np.sin(t)

    def pair(p, q):
        return np.sqrt(np.maximum(2 + p + 2 * _R2 * q, 0.0)) - np.sqrt(
            np.maximum(2 + p - 2 * _R2 * q, 0.0)
        )

    return pair(u * u - v * v, u), pair(v * v - u * u, v)


_SQUARE_CORNERS = tuple(np.pi / 4 + k * np.pi / 2 for k in range(4))
# square corners as exact values, indexed like _SQUARE_CORNERS
_CORNER_XY = np.array([[2.0, 2.0], [-2.0, 2.0], [-2.0, -2.0], [2.0, -2.0]])


def _side_of(t):
    """Side index 0..3 (top, left, bottom, right) of the square for parameter t."""
    return np.floor_divide(np.mod(t - np.pi / 4, 2 * np.pi), np.pi / 2).astype(int) % 4


def _square_local(side, tc, delta):
    """Square boundary at ``t = tc + delta`` on the given side, as an exact
    corner anchor plus an offset that stays accurate for tiny ``delta``.

    On the unit circle sqrt(2 + u^2 - v^2 +- 2 sqrt2 u) = |sqrt2 u +- 1|, so the
    map is x = clip(2 sqrt2 cos t, -2, 2), y = clip(2 sqrt2 sin t, -2, 2); on the
    top/bottom sides x moves and y is flat, on the left/right sides y moves.
    """
    side = np.asarray(side)
    tc = np.asarray(tc, dtype=float)
    delta = np.asarray(delta, dtype=float)
    t = tc + delta
    x_free = (side == 0) | (side == 2)
    k = np.rint((tc - np.pi / 4) / (np.pi / 2)).astype(int) % 4
    xa, ya = _CORNER_XY[k, 0], _CORNER_XY[k, 1]
    half = np.sin(delta / 2)
    xo = np.where(x_free, -4 * _R2 * np.sin(tc + delta / 2) * half, 0.0)
    yo = np.where(x_free, 0.0, 4 * _R2 * np.cos(tc + delta / 2) * half)
    c, s = 2 * _R2 * np.cos(t), 2 * _R2 * np.sin(t)
    dx, d2x = np.where(x_free, -s, 0.0), np.where(x_free, -c, 0.0)
    dy, d2y = np.where(x_free, 0.0, c), np.where(x_free, 0.0, -s)
    return (xa, xo, dx, d2x), (ya, yo, dy, d2y)


def _straight(side, tc, delta):
    (xa, xo, dx, d2x), (ya, yo, dy, d2y) = _square_local(side, tc, delta)
    rot = np.exp(1j * np.pi / 9)
    return (
        rot * (xa + 0.25j * ya),
        rot * (xo + 0.25j * yo),
        rot * (dx + 0.25j * dy),
        rot * (d2x + 0.25j * d2y),
    )


def _crescent(side, tc, delta):
    (xa, xo, dx, d2x), (ya, yo, dy, d2y) = _square_local(side, tc, delta)
    za, zo = 15 * xa + 1j * ya, 15 * xo + 1j * yo
    dz0, d2z0 = 15 * dx + 1j * dy, 15 * d2x + 1j * d2y
    den_a = 2 * za + 40j
    den = den_a + 2 * zo
    anchor = (5 * za - 20j) / den_a
    # Moebius difference g(a + o) - g(a) = 240i o / (den(a + o) den(a))
    offset = 240j * zo / (den * den_a)
    g1 = 240j / den**2
    g2 = -960j / den**3
    return anchor, offset, g1 * dz0, g2 * dz0**2 + g1 * d2z0


_PARAMETRIC = {
    "kite": (_kite, ()),
    "straight": (_straight, _SQUARE_CORNERS),
    "crescent": (_crescent, _SQUARE_CORNERS),
}


def _grading(s, p):
    """Kress' sigmoidal substitution on [0, 2pi] with derivatives 1 and 2.

    ``w(s)`` fixes 0 and 2pi and its first p-1 derivatives vanish there.
    Also returns ``2pi - w`` computed without cancellation near 2pi.
    """
    c = 1.0 / p - 0.5

    def v(x):
        r = (np.pi - x) / np.pi
        return c * r**3 + (x - np.pi) / (p * np.pi) + 0.5

    def dv(x):
        r = (np.pi - x) / np.pi
        return -3 * c * r**2 / np.pi + 1 / (p * np.pi)

    def d2v(x):
        r = (np.pi - x) / np.pi
        return 6 * c * r / np.pi**2

    s2 = 2 * np.pi - s
    v1, v2 = v(s), v(s2)
    A, B = v1**p, v2**p
    A1 = p * v1 ** (p - 1) * dv(s)
    B1 = -p * v2 ** (p - 1) * dv(s2)
    A2 = p * (p - 1) * v1 ** (p - 2) * dv(s) ** 2 + p * v1 ** (p - 1) * d2v(s)
    B2 = p * (p - 1) * v2 ** (p - 2) * dv(s2) ** 2 + p * v2 ** (p - 1) * d2v(s2)
    S = A + B
    S1 = A1 + B1
    num1 = A1 * B - A * B1
    w = 2 * np.pi * A / S
    w_rest = 2 * np.pi * B / S
    w1 = 2 * np.pi * num1 / S**2
    w2 = 2 * np.pi * ((A2 * B - A * B2) / S**2 - 2 * num1 * S1 / S**3)
    return w, w_rest, w1, w2


def _graded_parameter(tau, corners, p):
    """Map uniform ``tau`` to a parameter clustered at ``corners``.

    Returns the segment index, the nearest corner ``tc`` and the signed
    distance ``delta`` to it (accurate even when tiny), and the first two
    derivatives of the parameter with respect to ``tau``.
    """
    corners = np.asarray(corners, dtype=float)
    lengths = np.diff(np.append(corners, corners[0] + 2 * np.pi))
    rel = np.mod(tau - corners[0], 2 * np.pi) + corners[0]
    seg = np.clip(np.searchsorted(corners, rel, side="right") - 1, 0, len(corners) - 1)
    L = lengths[seg]
    sig = (rel - corners[seg]) * (2 * np.pi / L)
    w, w_rest, w1, w2 = _grading(sig, p)
    near_start = sig < np.pi
    tc = np.where(near_start, corners[seg], corners[seg] + L)
    delta = np.where(near_start, L * w, -L * w_rest) / (2 * np.pi)
    return seg, tc, delta, w1, w2 * (2 * np.pi / L)


def _spectral_derivatives(z):
    n = len(z)
    k = np.fft.fftfreq(n, 1.0 / n)
    zh = np.fft.fft(z)
    ik = 1j * k
    ik1 = ik.copy()
    ik1[n // 2] = 0.0  # Nyquist mode has no odd derivative
    return np.fft.ifft(ik1 * zh), np.fft.ifft(ik * ik * zh)


def boundary_frame(shape: "ShapeSpec", n: int, grading: int = 10) -> BoundaryFrame:
    """Sample ``shape`` at ``n`` uniform parameter values.

    Map-defined shapes use exact derivatives of the Laurent series and fill
    ``scale_factor``. The smooth kite is differentiated spectrally. Curves with
    corners (straight, crescent) use a graded parameter that clusters nodes at
    the corners, with exact piecewise derivatives.
    """
    if n < 64 or n % 2:
        raise ValueError("sample count must be even and >= 64")
    theta = 2 * np.pi * np.arange(n) / n
    scale = None
    anchors = offsets = None
    if shape.kind == "map":
        z, dz, d2z = shape.parametrization(theta)
        fm = shape.exterior_map
        scale = fm.gamma * np.abs(fm.derivative(fm.gamma * np.exp(1j * theta)))
    elif shape.corners:
        # half-step offset keeps nodes off the corners themselves
        tau = theta + np.pi / n
        seg, tc, delta, t1, t2 = _graded_parameter(tau, shape.corners, grading)
        anchors, offsets, dzt, d2zt = _PARAMETRIC[shape.kind][0](seg, tc, delta)
        z = anchors + offsets
        dz, d2z = dzt * t1, d2zt * t1**2 + dzt * t2
        theta = tau
    else:
        z = shape.sample(theta)
        dz, d2z = _spectral_derivatives(z)

    area2 = np.sum(np.imag(np.conj(z) * dz))
    if area2 < 0:
        # clockwise input: reverse and rebuild on the reflected grid
        z, dz, d2z = z[::-1], -dz[::-1], d2z[::-1]
        z, dz, d2z = np.roll(z, 1), np.roll(dz, 1), np.roll(d2z, 1)
        if scale is not None:
            scale = np.roll(scale[::-1], 1)
        if anchors is not None:
            anchors = np.roll(anchors[::-1], 1)
            offsets = np.roll(offsets[::-1], 1)

    speed = np.abs(dz)
    if np.any(speed == 0):
        raise ShapeError("parametrization has a stationary point on the sample grid")
    if not LinearRing(np.column_stack([z.real, z.imag])).is_simple:
        raise ShapeError(f"sampled curve of {shape.name!r} self-intersects")
    tangent = dz / speed
    normal = -1j * tangent
    curvature = np.imag(np.conj(dz) * d2z) / speed**3
    return BoundaryFrame(
        n=n,
        theta=_frozen(theta, float),
        points=_frozen(z),
        tangent=_frozen(tangent),
        normal=_frozen(normal),
        curvature=_frozen(curvature, float),
        jacobian=_frozen(speed, float),
        scale_factor=None if scale is None else _frozen(scale, float),
        shape=shape,
        anchors=None if anchors is None else _frozen(anchors),
        offsets=None if offsets is None else _frozen(offsets),
    )


# --------------------------------------------------------------------------
# Catalog


def _checked_map(fm: ExteriorMap, name: str) -> ExteriorMap:
    theta = 2 * np.pi * np.arange(512) / 512
    z = fm(fm.gamma * np.exp(1j * theta))
    if not LinearRing(np.column_stack([z.real, z.imag])).is_simple:
        raise ShapeError(f"map {name!r} is not univalent on |w| = gamma")
    return fm


def from_map(fm: ExteriorMap, name: str = "map") -> ShapeSpec:
    return ShapeSpec("map", name, (fm.gamma, fm.a0, *fm.coeffs), _checked_map(fm, name))


def curve(function, name: str = "curve") -> ShapeSpec:
    """Smooth closed curve given by a vectorized 2pi-periodic ``function(t)``."""
    return ShapeSpec("curve", name, function=function)


def disk(radius: float = 1.0, center: complex = 0j) -> ShapeSpec:
    return from_map(ExteriorMap(radius, center), "disk")


def ellipse(gamma: float = 1.0, e0: complex = 0j, e1: complex = 0.5) -> ShapeSpec:
    if abs(e1) >= gamma**2:
        raise ShapeError("ellipse map needs |e1| < gamma**2")
    return from_map(ExteriorMap(gamma, e0, [e1]), "ellipse")


def asymmetric() -> ShapeSpec:
    """The rotated polynomial map ``e^{i pi/5}(w + sum_k b_k w^-k)``, |w| = 1.

    Rotating the variable (w' = e^{i pi/5} w) brings it into normalized form
    with ``a_k = b_k e^{i(k+1) pi/5}``.
    """
    b = np.array([(1 - 2j) / 7, (1j - 1) / 6, 1j / 20, 1 / 20, 1j / 20, 1j / 50])
    k = np.arange(1, len(b) + 1)
    return from_map(ExteriorMap(1.0, 0j, b * np.exp(1j * (k + 1) * np.pi / 5)), "asymmetric")


def kite() -> ShapeSpec:
    return ShapeSpec("kite", "kite")


def straight() -> ShapeSpec:
    return ShapeSpec("straight", "straight")


def crescent() -> ShapeSpec:
    return ShapeSpec("crescent", "crescent")


CATALOG_NAMES = ("kite", "asymmetric", "straight", "crescent", "ellipse", "disk", "map")


def catalog(name: str, **params) -> ShapeSpec:
    """Look up a named shape; ``ellipse``, ``disk`` and ``map`` take parameters."""
    if name == "kite":
        return kite()
    if name == "asymmetric":
        return asymmetric()
    if name == "straight":
        return straight()
    if name == "crescent":
        return crescent()
    if name == "ellipse":
        return ellipse(params.get("gamma", 1.0), params.get("e0", 0j), params.get("e1", 0.5))
    if name == "disk":
        return disk(params.get("radius", 1.0), params.get("center", 0j))
    if name == "map":
        coeffs = list(params.get("coeffs", ()))
        return from_map(ExteriorMap(params.get("gamma", 1.0), params.get("a0", 0j), coeffs))
    raise KeyError(f"unknown shape {name!r}; expected one of {CATALOG_NAMES}")

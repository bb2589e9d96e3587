# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport log, sqrt, M_PI, INFINITY

cnp.import_array()


def kstar_matrix(anchors, offsets, normals, curvature, weights):
    cdef const double[:] ax = np.ascontiguousarray(np.real(anchors), dtype=np.float64)
    cdef const double[:] ay = np.ascontiguousarray(np.imag(anchors), dtype=np.float64)
    cdef const double[:] x = np.ascontiguousarray(np.real(offsets), dtype=np.float64)
    cdef const double[:] y = np.ascontiguousarray(np.imag(offsets), dtype=np.float64)
    cdef const double[:] nx = np.ascontiguousarray(np.real(normals), dtype=np.float64)
    cdef const double[:] ny = np.ascontiguousarray(np.imag(normals), dtype=np.float64)
    cdef const double[:] kap = np.ascontiguousarray(curvature, dtype=np.float64)
    cdef const double[:] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], i, j
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] K = out
    cdef double dx, dy, c = 1.0 / (2.0 * M_PI)
    for i in range(n):
        for j in range(n):
            if i == j:
                K[i, j] = kap[i] * w[i] * 0.5 * c
            else:
                dx = (ax[i] - ax[j]) + (x[i] - x[j])
                dy = (ay[i] - ay[j]) + (y[i] - y[j])
                K[i, j] = c * (dx * nx[i] + dy * ny[i]) / (dx * dx + dy * dy) * w[j]
    return out


def _single_layer_real(const double[:] x, const double[:] y, const double[:] qw,
                       const double[:] tx, const double[:] ty):
    cdef Py_ssize_t n = x.shape[0], m = tx.shape[0], i, j
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double acc, dx, dy
    for i in range(m):
        acc = 0.0
        for j in range(n):
            dx = tx[i] - x[j]
            dy = ty[i] - y[j]
            acc += 0.5 * log(dx * dx + dy * dy) * qw[j]
        o[i] = acc
    return out


def single_layer(points, weights, density, targets):
    targets = np.atleast_1d(np.asarray(targets, dtype=complex))
    x = np.ascontiguousarray(np.real(points), dtype=np.float64)
    y = np.ascontiguousarray(np.imag(points), dtype=np.float64)
    tx = np.ascontiguousarray(targets.real.ravel())
    ty = np.ascontiguousarray(targets.imag.ravel())
    dens = np.asarray(density)
    scale = np.asarray(weights, dtype=np.float64) / (2 * M_PI)
    re = _single_layer_real(x, y, np.ascontiguousarray(dens.real * scale), tx, ty)
    if np.iscomplexobj(dens):
        im = _single_layer_real(x, y, np.ascontiguousarray(dens.imag * scale), tx, ty)
        return (re + 1j * im).reshape(targets.shape)
    return re.reshape(targets.shape)


def _pair_stat(a, b, bint want_min):
    cdef const double[:] ax = np.ascontiguousarray(np.real(a), dtype=np.float64)
    cdef const double[:] ay = np.ascontiguousarray(np.imag(a), dtype=np.float64)
    cdef const double[:] bx = np.ascontiguousarray(np.real(b), dtype=np.float64)
    cdef const double[:] by = np.ascontiguousarray(np.imag(b), dtype=np.float64)
    cdef Py_ssize_t n = ax.shape[0], m = bx.shape[0], i, j
    cdef double best = INFINITY, worst = 0.0, row, d, dx, dy
    for i in range(n):
        row = INFINITY
        for j in range(m):
            dx = ax[i] - bx[j]
            dy = ay[i] - by[j]
            d = dx * dx + dy * dy
            if d < row:
                row = d
        if row < best:
            best = row
        if row > worst:
            worst = row
    return sqrt(best) if want_min else sqrt(worst)


def min_distance(a, b):
    return _pair_stat(a, b, True)


def directed_max_min(a, b):
    return _pair_stat(a, b, False)

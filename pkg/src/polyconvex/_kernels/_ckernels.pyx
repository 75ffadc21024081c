# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hull-probe inner loops (same API as _pykernels)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport atan2, cos, sin, floor, M_PI

cnp.import_array()


def monomial_exponents(int degree):
    return [(a, d - a) for d in range(degree + 1) for a in range(d, -1, -1)]


def monomial_table(points, int degree):
    cdef double complex[:, :] pts = np.ascontiguousarray(points, dtype=np.complex128)
    cdef Py_ssize_t n = pts.shape[0], i
    cdef int K = (degree + 1) * (degree + 2) // 2, d, a, col, k
    out = np.empty((n, K), dtype=np.complex128)
    cdef double complex[:, :] o = out
    cdef double complex zp[64]
    cdef double complex wp[64]
    if degree > 63:
        raise ValueError("degree too large")
    for i in range(n):
        zp[0] = 1.0
        wp[0] = 1.0
        for k in range(1, degree + 1):
            zp[k] = zp[k - 1] * pts[i, 0]
            wp[k] = wp[k - 1] * pts[i, 1]
        col = 0
        for d in range(degree + 1):
            for a in range(d, -1, -1):
                o[i, col] = zp[a] * wp[d - a]
                col += 1
    return out


cdef inline void _pmax(double re, double im, int m, double step, double *ct, double *st,
                       double *best, long *kk) noexcept nogil:
    cdef long k = <long>floor(atan2(im, re) / step + 0.5)
    k = ((k % m) + m) % m
    best[0] = ct[k] * re + st[k] * im
    kk[0] = k


def _tables(int m):
    th = 2.0 * np.pi * np.arange(m) / m
    return np.ascontiguousarray(np.cos(th)), np.ascontiguousarray(np.sin(th))


def polygon_max(values, int m):
    cdef double complex[:] v = np.ascontiguousarray(values, dtype=np.complex128)
    cdef Py_ssize_t n = v.shape[0], i
    best = np.empty(n)
    kidx = np.empty(n, dtype=np.int64)
    cdef double[:] b = best
    cdef long[:] kv = kidx
    ctab, stab = _tables(m)
    cdef double[:] ct = ctab
    cdef double[:] st = stab
    cdef double step = 2.0 * M_PI / m
    cdef double bb
    cdef long k
    with nogil:
        for i in range(n):
            _pmax(v[i].real, v[i].imag, m, step, &ct[0], &st[0], &bb, &k)
            b[i] = bb
            kv[i] = k
    return best, kidx


def constraint_rows(psi, sample_idx, angle_idx, int m):
    cdef double complex[:, :] P = np.ascontiguousarray(psi, dtype=np.complex128)
    cdef long[:] si = np.ascontiguousarray(sample_idx, dtype=np.int64)
    cdef long[:] ai = np.ascontiguousarray(angle_idx, dtype=np.int64)
    cdef Py_ssize_t r = si.shape[0], K = P.shape[1], i, j
    G = np.empty((r, 2 * K + 1))
    h = np.empty(r)
    cdef double[:, :] g = G
    cdef double[:] hv = h
    cdef double th, c, s
    cdef double complex x
    for i in range(r):
        th = 2.0 * M_PI * ai[i] / m
        c = cos(th)
        s = sin(th)
        for j in range(K):
            x = P[si[i], j]
            # exp(-i th) x = (c x.re + s x.im) + i (c x.im - s x.re)
            g[i, j] = c * x.real + s * x.imag
            g[i, K + j] = -(c * x.imag - s * x.real)
        g[i, 2 * K] = -1.0
        hv[i] = -c
    return G, h


def eval_poly_max(table, coeffs, int m):
    # the matrix-vector product is left to BLAS, which beats a hand loop here
    return polygon_max(np.asarray(table) @ np.asarray(coeffs), m)

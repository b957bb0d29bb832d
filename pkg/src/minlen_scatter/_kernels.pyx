# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled recurrence kernels.

Operation order matches ``_kernels_py`` exactly; keep the two in sync.
"""

import numpy as np
from libc.math cimport fabs

cdef int MILLER_PAD = 40
cdef double _BIG = 1e200
cdef double _RESCALE = 1e-200


def legendre_table(int lmax, x):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef int l
    out = np.empty((lmax + 1, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        o[0, i] = 1.0
        if lmax >= 1:
            o[1, i] = xv[i]
        for l in range(1, lmax):
            o[l + 1, i] = ((2 * l + 1) * xv[i] * o[l, i] - l * o[l - 1, i]) / (l + 1)
    return out


def legendre_series(coef_re, coef_im, x):
    cdef double[::1] cr = np.ascontiguousarray(coef_re, dtype=np.float64)
    cdef double[::1] ci = np.ascontiguousarray(coef_im, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef int nc = cr.shape[0], l
    cdef double p_prev, p, p_next, re, im, t
    out_re = np.zeros(n)
    out_im = np.zeros(n)
    cdef double[::1] ore = out_re, oim = out_im
    if nc == 0:
        return out_re, out_im
    for i in range(n):
        t = xv[i]
        p_prev = 1.0
        re = 0.0 + cr[0] * p_prev
        im = 0.0 + ci[0] * p_prev
        if nc > 1:
            p = t
            re = re + cr[1] * p
            im = im + ci[1] * p
            for l in range(1, nc - 1):
                p_next = ((2 * l + 1) * t * p - l * p_prev) / (l + 1)
                p_prev = p
                p = p_next
                re = re + cr[l + 1] * p
                im = im + ci[l + 1] * p
        ore[i] = re
        oim[i] = im
    return out_re, out_im


cdef void _jn_upward(int lmax, double x, double s, double c, double[:, ::1] o, Py_ssize_t i):
    cdef int l
    o[0, i] = s / x
    if lmax >= 1:
        o[1, i] = (o[0, i] - c) / x
    for l in range(1, lmax):
        o[l + 1, i] = (2 * l + 1) / x * o[l, i] - o[l - 1, i]


cdef void _jn_miller(int lmax, double x, double s, double c, double[:, ::1] o, Py_ssize_t i):
    cdef int top = 2 * lmax + MILLER_PAD, l, m
    cdef double upper = 0.0, cur = 1e-300, lower, j0, j1, scale
    for m in range(lmax + 1):
        o[m, i] = 0.0
    for l in range(top, 0, -1):
        lower = (2 * l + 1) / x * cur - upper
        upper = cur
        cur = lower
        if l - 1 <= lmax:
            o[l - 1, i] = cur
        if fabs(cur) > _BIG:
            cur = cur * _RESCALE
            upper = upper * _RESCALE
            for m in range(lmax + 1):
                o[m, i] = o[m, i] * _RESCALE
    j0 = s / x
    j1 = (j0 - c) / x
    if lmax >= 1 and not (fabs(j0) >= fabs(j1)):
        scale = j1 / o[1, i]
    else:
        scale = j0 / o[0, i]
    for m in range(lmax + 1):
        o[m, i] = o[m, i] * scale


def spherical_jn_table(int lmax, x, sinx, cosx):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(sinx, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(cosx, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    out = np.empty((lmax + 1, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        if xv[i] >= lmax:
            _jn_upward(lmax, xv[i], sv[i], cv[i], o, i)
        else:
            _jn_miller(lmax, xv[i], sv[i], cv[i], o, i)
    return out


def spherical_yn_table(int lmax, x, sinx, cosx):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] sv = np.ascontiguousarray(sinx, dtype=np.float64)
    cdef double[::1] cv = np.ascontiguousarray(cosx, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    cdef int l
    out = np.empty((lmax + 1, n))
    cdef double[:, ::1] o = out
    for i in range(n):
        o[0, i] = -cv[i] / xv[i]
        if lmax >= 1:
            o[1, i] = (o[0, i] - sv[i]) / xv[i]
        for l in range(1, lmax):
            o[l + 1, i] = (2 * l + 1) / xv[i] * o[l, i] - o[l - 1, i]
    return out

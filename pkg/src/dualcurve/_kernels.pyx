# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: per-facet power sums and batched radial evaluation.

Mirrors ``_kernels_py``; selected by ``_backend`` when the build produced
this extension.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, pow, rint, sqrt

cnp.import_array()


cdef inline double _half_pow(double r, int ipart, bint has_half) nogil:
    # r**(ipart + 0.5*has_half) for small |ipart|, avoiding libm pow
    cdef double p = 1.0
    cdef int k = ipart if ipart >= 0 else -ipart
    while k > 0:
        p *= r
        k -= 1
    if ipart < 0:
        p = 1.0 / p
    if has_half:
        p *= sqrt(r)
    return p


def facet_power_sums(points, weights, ids, Py_ssize_t n_groups, double expo):
    """Per-group sums of w * |x|**expo.

    points : (N, d) quadrature points, weights : (N,), ids : (N,) int group
    index of each point.  Returns (n_groups,) array.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wts = np.ascontiguousarray(weights, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] gid = np.ascontiguousarray(ids, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n_groups, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1]
    cdef Py_ssize_t i, j
    cdef double s, r
    # integer and half-integer exponents (the common case: expo = q - dim
    # with small q) skip libm pow entirely
    cdef bint is_half = 2.0 * expo == rint(2.0 * expo) and fabs(expo) <= 8.0
    cdef bint has_half = expo != rint(expo)
    cdef int ipart = <int>rint(expo - (0.5 if has_half else 0.0))
    for i in range(n):
        if expo == 0.0:
            out[gid[i]] += wts[i]
            continue
        s = 0.0
        for j in range(d):
            s += pts[i, j] * pts[i, j]
        r = sqrt(s)
        if is_half:
            out[gid[i]] += wts[i] * _half_pow(r, ipart, has_half)
        else:
            out[gid[i]] += wts[i] * pow(r, expo)
    return out


def radial_batch(normals, offsets, dirs, double tie_tol=1e-10):
    """Radial function of {x : x.v_i <= h_i} on a batch of unit directions.

    Returns (rho, idx, tie): the min of h_i/(u.v_i) over i with u.v_i > 0,
    the argmin facet, and whether a second facet ties within relative
    tie_tol (the direction then lies on a cone boundary).
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] vs = np.ascontiguousarray(normals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hs = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] us = np.ascontiguousarray(
        np.atleast_2d(np.asarray(dirs, dtype=np.float64)))
    cdef Py_ssize_t n = us.shape[0], m = vs.shape[0], d = vs.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rho = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] tie = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t i, j, k, best_j
    cdef double dot, cand, best, second
    for i in range(n):
        best = INFINITY
        second = INFINITY
        best_j = -1
        for j in range(m):
            dot = 0.0
            for k in range(d):
                dot += us[i, k] * vs[j, k]
            if dot <= 0.0:
                continue
            cand = hs[j] / dot
            if cand < best:
                second = best
                best = cand
                best_j = j
            elif cand < second:
                second = cand
        rho[i] = best
        idx[i] = best_j
        if second - best <= tie_tol * best:
            tie[i] = 1
    return rho, idx, tie.view(np.bool_)

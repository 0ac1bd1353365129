# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled element assembly kernels (see _kernels_py for the fallback twin)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def stiffness_triplets(const double[:, ::1] xy, const long[:, ::1] tris, const double[:, ::1] amat):
    cdef Py_ssize_t nt = tris.shape[0]
    rows_arr = np.empty(nt * 9, dtype=np.int64)
    cols_arr = np.empty(nt * 9, dtype=np.int64)
    vals_arr = np.empty(nt * 9)
    cdef long[::1] rows = rows_arr
    cdef long[::1] cols = cols_arr
    cdef double[::1] vals = vals_arr
    cdef Py_ssize_t e, i, j, k
    cdef long v0, v1, v2
    cdef double x0, x1, x2, y0, y1, y2, area, scale, a11, a12, a22
    cdef double b[3]
    cdef double c[3]
    cdef long idx[3]
    for e in range(nt):
        v0 = tris[e, 0]
        v1 = tris[e, 1]
        v2 = tris[e, 2]
        x0 = xy[v0, 0]; y0 = xy[v0, 1]
        x1 = xy[v1, 0]; y1 = xy[v1, 1]
        x2 = xy[v2, 0]; y2 = xy[v2, 1]
        b[0] = y1 - y2; b[1] = y2 - y0; b[2] = y0 - y1
        c[0] = x2 - x1; c[1] = x0 - x2; c[2] = x1 - x0
        area = 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
        scale = 0.25 / area
        a11 = amat[e, 0]; a12 = amat[e, 1]; a22 = amat[e, 2]
        idx[0] = v0; idx[1] = v1; idx[2] = v2
        for i in range(3):
            for j in range(3):
                k = 9 * e + 3 * i + j
                vals[k] = scale * (
                    a11 * b[i] * b[j]
                    + a12 * (b[i] * c[j] + c[i] * b[j])
                    + a22 * c[i] * c[j]
                )
                rows[k] = idx[i]
                cols[k] = idx[j]
    return rows_arr, cols_arr, vals_arr


def mass_triplets(const double[:, ::1] xy, const long[:, ::1] tris, const double[:, ::1] hmid):
    cdef Py_ssize_t nt = tris.shape[0]
    rows_arr = np.empty(nt * 9, dtype=np.int64)
    cols_arr = np.empty(nt * 9, dtype=np.int64)
    vals_arr = np.empty(nt * 9)
    cdef long[::1] rows = rows_arr
    cdef long[::1] cols = cols_arr
    cdef double[::1] vals = vals_arr
    cdef Py_ssize_t e, i, j, k
    cdef long v0, v1, v2
    cdef double x0, x1, x2, y0, y1, y2, area, scale
    cdef long idx[3]
    for e in range(nt):
        v0 = tris[e, 0]
        v1 = tris[e, 1]
        v2 = tris[e, 2]
        x0 = xy[v0, 0]; y0 = xy[v0, 1]
        x1 = xy[v1, 0]; y1 = xy[v1, 1]
        x2 = xy[v2, 0]; y2 = xy[v2, 1]
        area = 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
        scale = area / 12.0
        idx[0] = v0; idx[1] = v1; idx[2] = v2
        for i in range(3):
            for j in range(3):
                k = 9 * e + 3 * i + j
                if i == j:
                    vals[k] = scale * (hmid[e, (i + 1) % 3] + hmid[e, (i + 2) % 3])
                else:
                    vals[k] = scale * hmid[e, 3 - i - j]
                rows[k] = idx[i]
                cols[k] = idx[j]
    return rows_arr, cols_arr, vals_arr

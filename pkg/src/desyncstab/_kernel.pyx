# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled depth-first product enumeration for 2x2 matrix classes.

Same contract as ``_enum_py.enumerate_bounds``; each word costs one 2x2
left-multiply of the parent product.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, hypot, fabs, exp, log, copysign

cnp.import_array()


cdef inline double _sigma_max(double a, double b, double c, double d) nogil:
    cdef double g11 = a * a + c * c
    cdef double g22 = b * b + d * d
    cdef double g12 = a * b + c * d
    cdef double v = 0.5 * (g11 + g22 + hypot(g11 - g22, 2.0 * g12))
    if v < 0.0:
        return 0.0
    return sqrt(v)


cdef inline double _rho(double a, double b, double c, double d) nogil:
    cdef double half = 0.5 * (a + d)
    cdef double det = a * d - b * c
    cdef double disc = half * half - det
    cdef double big, small
    if disc < 0.0:
        return sqrt(det)
    big = half + copysign(sqrt(disc), half)
    if big == 0.0:
        return 0.0
    small = det / big
    big = fabs(big)
    small = fabs(small)
    return big if big > small else small


def enumerate_bounds(mats, int depth, bint prune=False):
    cdef double[:, :, ::1] A = np.ascontiguousarray(mats, dtype=np.float64)
    cdef int m = A.shape[0]
    if A.shape[1] != 2 or A.shape[2] != 2:
        raise ValueError("compiled kernel handles 2x2 classes only")
    if depth < 1:
        raise ValueError("depth must be >= 1")

    max_norm_arr = np.zeros(depth)
    max_rad_arr = np.full(depth, -1.0)
    wit_arr = np.zeros((depth, depth), dtype=np.int64)
    cdef double[::1] max_norm = max_norm_arr
    cdef double[::1] max_rad = max_rad_arr
    cdef long long[:, ::1] wit = wit_arr

    # prod[l] holds the product of the first l chosen factors
    cdef double[:, ::1] prod = np.zeros((depth + 1, 4))
    cdef long long[::1] choice = np.full(depth + 1, -1, dtype=np.int64)
    cdef int level = 1, j, i
    cdef double a, b, c, d, nrm, r, best_rooted = 0.0, thresh
    prod[0, 0] = 1.0
    prod[0, 3] = 1.0

    with nogil:
        while level >= 1:
            choice[level] += 1
            if choice[level] >= m:
                choice[level] = -1
                level -= 1
                continue
            j = <int>choice[level]
            a = A[j, 0, 0] * prod[level - 1, 0] + A[j, 0, 1] * prod[level - 1, 2]
            b = A[j, 0, 0] * prod[level - 1, 1] + A[j, 0, 1] * prod[level - 1, 3]
            c = A[j, 1, 0] * prod[level - 1, 0] + A[j, 1, 1] * prod[level - 1, 2]
            d = A[j, 1, 0] * prod[level - 1, 1] + A[j, 1, 1] * prod[level - 1, 3]
            prod[level, 0] = a
            prod[level, 1] = b
            prod[level, 2] = c
            prod[level, 3] = d

            nrm = _sigma_max(a, b, c, d)
            if nrm > max_norm[level - 1]:
                max_norm[level - 1] = nrm

            # rho <= norm: in prune mode skip products too small to matter
            thresh = -1.0
            if prune and best_rooted > 0.0:
                thresh = exp(level * log(best_rooted)) * 1e-3
            if nrm >= thresh:
                r = _rho(a, b, c, d)
                if r > max_rad[level - 1]:
                    max_rad[level - 1] = r
                    for i in range(1, level + 1):
                        wit[level - 1, i - 1] = choice[i]
                    if r > 0.0 and exp(log(r) / level) > best_rooted:
                        best_rooted = exp(log(r) / level)

            if level < depth:
                level += 1

    witnesses = [[int(v) for v in wit_arr[n, : n + 1]] for n in range(depth)]
    max_rad_arr[max_rad_arr < 0.0] = 0.0
    return max_norm_arr, max_rad_arr, witnesses

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Semantics match `_kernels_py` exactly."""

import numpy as np

cimport numpy as cnp


def isotonic_nonincreasing(z):
    """Project ``z`` onto the non-increasing cone (pool adjacent violators)."""
    cdef cnp.float64_t[::1] zz = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = zz.shape[0]
    out = np.empty(n, dtype=np.float64)
    if n == 0:
        return out
    cdef cnp.float64_t[::1] t = out
    cdef cnp.float64_t[::1] bsum = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] bcnt = np.empty(n, dtype=np.intp)
    cdef Py_ssize_t nb = 0, i, b, k
    cdef double mean
    for i in range(n):
        bsum[nb] = zz[i]
        bcnt[nb] = 1
        nb += 1
        while nb >= 2 and bsum[nb - 1] * bcnt[nb - 2] > bsum[nb - 2] * bcnt[nb - 1]:
            bsum[nb - 2] += bsum[nb - 1]
            bcnt[nb - 2] += bcnt[nb - 1]
            nb -= 1
    k = 0
    for b in range(nb):
        mean = bsum[b] / bcnt[b]
        for i in range(bcnt[b]):
            t[k] = mean
            k += 1
    return out


cdef int _rec(cnp.uint8_t[:, ::1] m1, cnp.uint8_t[:, ::1] m2,
              Py_ssize_t[::1] perm, cnp.uint8_t[::1] used,
              Py_ssize_t i, int partial, int best, bint diag,
              Py_ssize_t n) noexcept:
    cdef Py_ssize_t v, j
    cdef int c, r
    if i == n:
        return partial
    for v in range(n):
        if used[v]:
            continue
        c = partial
        if diag:
            c += m1[v, v] != m2[i, i]
        for j in range(i):
            c += m1[v, perm[j]] != m2[i, j]
        if c < best:
            used[v] = 1
            perm[i] = v
            r = _rec(m1, m2, perm, used, i + 1, c, best, diag, n)
            if r < best:
                best = r
            used[v] = 0
    return best


def ged_search(a1, a2, include_diagonal):
    """Minimum pairwise mismatch count over all vertex bijections."""
    cdef cnp.uint8_t[:, ::1] m1 = np.ascontiguousarray(a1, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] m2 = np.ascontiguousarray(a2, dtype=np.uint8)
    cdef Py_ssize_t n = m2.shape[0]
    if n == 0:
        return 0
    cdef Py_ssize_t[::1] perm = np.arange(n, dtype=np.intp)
    cdef bint diag = bool(include_diagonal)
    cdef int best = 0
    cdef Py_ssize_t i, j
    for i in range(n):
        if diag:
            best += m1[i, i] != m2[i, i]
        for j in range(i):
            best += m1[i, j] != m2[i, j]
    cdef cnp.uint8_t[::1] used = np.zeros(n, dtype=np.uint8)
    return _rec(m1, m2, perm, used, 0, 0, best, diag, n)

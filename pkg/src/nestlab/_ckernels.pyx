# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels; see ``_pykernels`` for the reference semantics."""
from libc.stdlib cimport malloc, free

STAIRCASE = 0
STRICT = 1


cdef bint _image_ok(int* minc, int* maxc, int m, int mode) nogil:
    cdef int R, lo, hi
    cdef int running = 0
    cdef int prev = 0
    for R in range(1, m + 1):
        hi = maxc[R]
        if hi == 0:
            continue
        lo = minc[R]
        if mode == 0:
            if running > lo:
                return False
            if hi > running:
                running = hi
        else:
            if lo != hi or lo <= prev:
                return False
            prev = lo
    return True


def cellset_ok(rows, cols, int m, int mode):
    cdef int* minc = <int*>malloc((m + 1) * sizeof(int))
    cdef int* maxc = <int*>malloc((m + 1) * sizeof(int))
    cdef int R, C, i
    cdef bint ok
    try:
        for i in range(m + 1):
            minc[i] = m + 1
            maxc[i] = 0
        for R, C in zip(rows, cols):
            if C < minc[R]:
                minc[R] = C
            if C > maxc[R]:
                maxc[R] = C
        ok = _image_ok(minc, maxc, m, mode)
    finally:
        free(minc)
        free(maxc)
    return ok


def scan_images(const int[:] sup_rows, const int[:] sup_cols, const int[:] offsets,
                const int[:, :] fmap, int m, int mode):
    cdef Py_ssize_t nsup = offsets.shape[0] - 1
    cdef Py_ssize_t mu = fmap.shape[0]
    cdef Py_ssize_t k, i, s
    cdef int a, b, R, C, j
    cdef int result = -1
    cdef int* minc = <int*>malloc((m + 1) * sizeof(int))
    cdef int* maxc = <int*>malloc((m + 1) * sizeof(int))
    try:
        with nogil:
            for k in range(nsup):
                for j in range(m + 1):
                    minc[j] = m + 1
                    maxc[j] = 0
                for i in range(offsets[k], offsets[k + 1]):
                    a = sup_rows[i]
                    b = sup_cols[i]
                    for s in range(mu):
                        R = fmap[s, a]
                        C = fmap[s, b]
                        if C < minc[R]:
                            minc[R] = C
                        if C > maxc[R]:
                            maxc[R] = C
                if not _image_ok(minc, maxc, m, mode):
                    result = <int>k
                    break
    finally:
        free(minc)
        free(maxc)
    return result

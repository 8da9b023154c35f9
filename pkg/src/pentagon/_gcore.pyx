# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Grassmann product kernel; same contract as ``_kernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int _sign(uint64_t a, uint64_t b) nogil:
    cdef int swaps = 0
    cdef uint64_t low
    while b:
        low = b & (~b + 1)
        swaps += _popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if (swaps & 1) else 1


def reorder_sign(long long a, long long b):
    if a & b:
        return 0
    return _sign(<uint64_t>a, <uint64_t>b)


def mul_dense(ma, ca, mb, cb, int ngen):
    cdef int64_t[::1] ma_v = np.ascontiguousarray(ma, dtype=np.int64)
    cdef int64_t[::1] mb_v = np.ascontiguousarray(mb, dtype=np.int64)
    cdef double complex[::1] ca_v = np.ascontiguousarray(ca, dtype=np.complex128)
    cdef double complex[::1] cb_v = np.ascontiguousarray(cb, dtype=np.complex128)
    out = np.zeros(1 << ngen, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t i, j, na = ma_v.shape[0], nb = mb_v.shape[0]
    cdef uint64_t a, b
    cdef double complex x
    with nogil:
        for i in range(na):
            a = <uint64_t>ma_v[i]
            x = ca_v[i]
            for j in range(nb):
                b = <uint64_t>mb_v[j]
                if a & b:
                    continue
                if _sign(a, b) > 0:
                    o[a | b] += x * cb_v[j]
                else:
                    o[a | b] -= x * cb_v[j]
    return out

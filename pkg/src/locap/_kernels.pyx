# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Ryser-permanent and the multi-photon block lift.

Contracts match locap._kernels_py; matrices are complex128 C-contiguous and
permanent size is capped at 16.
"""

import numpy as np

MAX_PERMANENT_SIZE = 16
BACKEND_NAME = "cython"


cdef double complex _ryser(const double complex* w, Py_ssize_t k) noexcept nogil:
    # Per(A) = (-1)^k sum_{S nonempty} (-1)^|S| prod_i sum_{j in S} A[i, j],
    # subsets visited in Gray order so each step updates one column.
    cdef double complex sums[16]
    cdef double complex total = 0
    cdef double complex prod
    cdef double sign = -1.0
    cdef unsigned int t, gray, prev = 0, bit
    cdef Py_ssize_t i, j
    if k == 0:
        return 1
    for i in range(k):
        sums[i] = 0
    for t in range(1, <unsigned int> 1 << k):
        gray = t ^ (t >> 1)
        bit = gray ^ prev
        j = 0
        while not (bit & 1):
            bit >>= 1
            j += 1
        if gray & (<unsigned int> 1 << j):
            for i in range(k):
                sums[i] = sums[i] + w[i * k + j]
        else:
            for i in range(k):
                sums[i] = sums[i] - w[i * k + j]
        prod = 1
        for i in range(k):
            prod = prod * sums[i]
        total = total + sign * prod
        sign = -sign
        prev = gray
    if k & 1:
        return -total
    return total


def permanent(a):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t k = a.shape[0]
    if k > MAX_PERMANENT_SIZE:
        raise ValueError(f"permanent size {k} exceeds cap {MAX_PERMANENT_SIZE}")
    if k == 0:
        return 1.0 + 0.0j
    cdef const double complex[:, ::1] av = a
    return complex(_ryser(&av[0, 0], k))


def lift_blocks(u, reps, norms):
    """See locap._kernels_py.lift_blocks."""
    u = np.ascontiguousarray(u, dtype=np.complex128)
    reps = np.ascontiguousarray(reps, dtype=np.int64)
    norms = np.ascontiguousarray(norms, dtype=np.float64)
    cdef Py_ssize_t g = reps.shape[0]
    cdef Py_ssize_t k = reps.shape[1]
    if k > MAX_PERMANENT_SIZE:
        raise ValueError(f"photon count {k} exceeds permanent cap {MAX_PERMANENT_SIZE}")
    out = np.empty((g, g), dtype=np.complex128)
    cdef double complex[:, ::1] out_v = out
    cdef const double complex[:, ::1] uv = u
    cdef const long[:, ::1] rv = reps
    cdef const double[::1] nv = norms
    cdef double complex w[256]
    cdef Py_ssize_t r, c, i, j
    with nogil:
        for r in range(g):
            for c in range(g):
                for i in range(k):
                    for j in range(k):
                        w[i * k + j] = uv[rv[r, i], rv[c, j]]
                out_v[r, c] = _ryser(w, k) / (nv[r] * nv[c])
    return out

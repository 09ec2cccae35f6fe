# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled group-table kernels; same contract as ``_pykernels``."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

DEF MAXN = 20


cdef inline long long _code(const unsigned char* eta, const int* perm, int n,
                            const long long* fact) noexcept nogil:
    cdef long long e = 0
    cdef long long rank = 0
    cdef int i, j, smaller
    for i in range(n):
        e = (e << 1) | eta[i]
        smaller = 0
        for j in range(i + 1, n):
            if perm[j] < perm[i]:
                smaller += 1
        rank += smaller * fact[n - 1 - i]
    return e * fact[n] + rank


cdef void _fill_fact(long long* fact, int n) noexcept nogil:
    cdef int i
    fact[0] = 1
    for i in range(1, n + 1):
        fact[i] = fact[i - 1] * i


def encode(etas, perms):
    cdef cnp.uint8_t[:, ::1] e
    cdef int[:, ::1] p
    etas = np.ascontiguousarray(etas, dtype=np.uint8)
    perms = np.ascontiguousarray(perms, dtype=np.int32)
    if etas.ndim == 1:
        etas = etas[None, :]
        perms = perms[None, :]
    e = etas
    p = perms
    cdef Py_ssize_t m = p.shape[0]
    cdef int n = <int>p.shape[1]
    if n > MAXN:
        raise ValueError(f"rank {n} exceeds kernel limit {MAXN}")
    cdef long long fact[MAXN + 1]
    _fill_fact(fact, n)
    out = np.empty(m, dtype=np.int64)
    cdef long long[::1] o = out
    cdef Py_ssize_t r
    with nogil:
        for r in range(m):
            o[r] = _code(&e[r, 0], &p[r, 0], n, fact)
    return out


def product_codes(etas, perms, rows):
    cdef cnp.uint8_t[:, ::1] e = np.ascontiguousarray(etas, dtype=np.uint8)
    cdef int[:, ::1] p = np.ascontiguousarray(perms, dtype=np.int32)
    cdef long long[::1] rw = np.ascontiguousarray(rows, dtype=np.int64)
    cdef Py_ssize_t N = p.shape[0]
    cdef int n = <int>p.shape[1]
    if n > MAXN:
        raise ValueError(f"rank {n} exceeds kernel limit {MAXN}")
    cdef Py_ssize_t R = rw.shape[0]
    out = np.empty((R, N), dtype=np.int64)
    cdef long long[:, ::1] o = out
    cdef long long fact[MAXN + 1]
    cdef int inv[MAXN]
    cdef int newp[MAXN]
    cdef unsigned char newe[MAXN]
    cdef Py_ssize_t r, h, g
    cdef int k
    _fill_fact(fact, n)
    with nogil:
        for r in range(R):
            g = rw[r]
            for k in range(n):
                inv[p[g, k]] = k
            for h in range(N):
                for k in range(n):
                    newp[k] = p[g, p[h, k]]
                    newe[k] = e[g, k] ^ e[h, inv[k]]
                o[r, h] = _code(newe, newp, n, fact)
    return out

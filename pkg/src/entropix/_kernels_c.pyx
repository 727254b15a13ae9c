# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the synthetic logits oracle.

Must stay bit-identical to ``_kernels_py``; see the parity tests.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef uint64_t MIX_M1 = 0xBF58476D1CE4E5B9UL
cdef uint64_t MIX_M2 = 0x94D049BB133111EBUL
cdef uint64_t TOK_SALT = 0x8CB92BA72F3D8DD7UL
cdef uint64_t CTX_SALT = 0xABCC79579A4E1CBBUL
cdef uint64_t FOLD_TOK = 0x9E3779B97F4A7C15UL
cdef uint64_t FOLD_IDX = 0xC2B2AE3D27D4EB4FUL
cdef uint64_t FOLD_INIT = 0x243F6A8885A308D3UL

cdef double INV_2_64 = 2.0 ** -64


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = z + GOLDEN
    z = (z ^ (z >> 30)) * MIX_M1
    z = (z ^ (z >> 27)) * MIX_M2
    return z ^ (z >> 31)


def mix64(z):
    return _mix(<uint64_t> z)


def prefix_fold(cnp.ndarray[cnp.uint64_t, ndim=1] tokens,
                cnp.ndarray[cnp.uint64_t, ndim=1] indices):
    cdef Py_ssize_t n = tokens.shape[0]
    cdef Py_ssize_t j
    cdef uint64_t acc = FOLD_INIT
    if n == 0:
        return _mix(FOLD_INIT)
    for j in range(n):
        acc ^= _mix(tokens[j] * FOLD_TOK + indices[j] * FOLD_IDX)
    return _mix(acc)


def raw_logits(pos_key, ctx_key, double c, int vocab, int tstar, double gap):
    cdef uint64_t pk = <uint64_t> pos_key
    cdef uint64_t ck = <uint64_t> ctx_key
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(vocab, dtype=np.float64)
    cdef Py_ssize_t k
    cdef double u, u2
    for k in range(vocab):
        u = <double> _mix(pk + (<uint64_t> k) * TOK_SALT) * INV_2_64
        if c != 0.0:
            u2 = <double> _mix(ck + (<uint64_t> k) * CTX_SALT) * INV_2_64
            u = (1.0 - c) * u + c * u2
        out[k] = u
    out[tstar] = out[tstar] + gap
    return out

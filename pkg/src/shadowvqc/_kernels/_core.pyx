# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the kernels in ``_ref``.

Same inputs, same IEEE-754 comparisons, same exact accumulations; the two
backends are interchangeable bit-for-bit.  See ``_ref`` for the contract.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sample_outcomes(const cnp.uint8_t[::1] pattern_is_r,
                    const double[:, :, ::1] uniforms,
                    double flip_noise,
                    int force_basis=-1):
    cdef Py_ssize_t n_shots = uniforms.shape[1]
    cdef Py_ssize_t n_qubits = uniforms.shape[2]
    out = np.empty((n_shots, n_qubits), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] codes = out
    cdef Py_ssize_t t, q
    cdef double u_flip, u_basis, u_out
    cdef int is_r, basis
    cdef double one_third = 1.0 / 3.0
    cdef double two_thirds = 2.0 / 3.0

    for t in range(n_shots):
        for q in range(n_qubits):
            u_flip = uniforms[0, t, q]
            u_basis = uniforms[1, t, q]
            u_out = uniforms[2, t, q]
            is_r = pattern_is_r[q] ^ (u_flip < flip_noise)
            if force_basis >= 0:
                basis = force_basis
            else:
                basis = (u_basis >= one_third) + (u_basis >= two_thirds)
            if basis == 2:
                codes[t, q] = <cnp.uint8_t>is_r
            elif basis == 0:
                codes[t, q] = <cnp.uint8_t>(2 + (u_out >= 0.5))
            else:
                codes[t, q] = <cnp.uint8_t>(4 + (u_out >= 0.5))
    return out


def count_symbols(const cnp.uint8_t[:, ::1] codes):
    cdef Py_ssize_t n_shots = codes.shape[0]
    cdef Py_ssize_t n_qubits = codes.shape[1]
    out = np.zeros((n_qubits, 6), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = out
    cdef Py_ssize_t t, q

    for t in range(n_shots):
        for q in range(n_qubits):
            counts[q, codes[t, q]] += 1
    return out


def z_mean_from_uniforms(double c1, double c2, double c3,
                         const double[::1] uniforms):
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef Py_ssize_t i
    cdef int idx
    cdef double u
    cdef double total = 0.0

    for i in range(n):
        u = uniforms[i]
        idx = (u >= c1) + (u >= c2) + (u >= c3)
        if idx == 0:
            total += 1.0
        elif idx == 3:
            total -= 1.0
    return total / n

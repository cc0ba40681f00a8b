# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled annealing loops.

Argument layout and floating-point evaluation order mirror ``_pure.py`` so the
two backends return bit-identical results.
"""
from libc.math cimport exp
from libc.stdint cimport int64_t, int8_t, uint64_t

import numpy as np


cdef inline void _full_fields(const int64_t[::1] indptr, const int64_t[::1] indices,
                              const double[::1] data, const double[::1] h,
                              const int8_t[::1] sigma, double[::1] f) noexcept nogil:
    cdef Py_ssize_t i, k, n = h.shape[0]
    cdef double acc
    for i in range(n):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc = acc + data[k] * <double>sigma[indices[k]]
        f[i] = h[i] + acc


cdef inline double _energy_from_fields(const double[::1] h, const int8_t[::1] sigma,
                                       const double[::1] f) noexcept nogil:
    cdef Py_ssize_t i, n = h.shape[0]
    cdef double acc = 0.0
    for i in range(n):
        acc = acc + <double>sigma[i] * (f[i] + h[i])
    return -0.5 * acc


def ssa_run(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] data,
            const double[::1] h, const double[::1] nu, double[::1] Is, int8_t[::1] sigma,
            const uint64_t[:, ::1] noise, double I0, double beta, double alpha, Py_ssize_t cycles,
            double[::1] energy_trace=None, double[::1] i0_trace=None, bint incremental=False):
    """Run ``cycles`` synchronous SSA steps in place on ``Is``/``sigma``.

    Returns the pseudo inverse temperature used by the last step.
    """
    cdef Py_ssize_t n = h.shape[0]
    cdef Py_ssize_t t, i, k, j
    cdef double I, s, delta, I0_last = I0
    cdef bint trace_e = energy_trace is not None
    cdef bint trace_i0 = i0_trace is not None
    cdef uint64_t bit
    cdef int8_t new
    cdef double[::1] f = np.empty(n, dtype=np.float64)
    cdef int8_t[::1] old = np.empty(n, dtype=np.int8)

    with nogil:
        _full_fields(indptr, indices, data, h, sigma, f)
        for t in range(cycles):
            if t > 0 and not incremental:
                _full_fields(indptr, indices, data, h, sigma, f)
            for i in range(n):
                bit = (noise[t, i >> 6] >> (i & 63)) & 1
                if bit:
                    I = f[i] + nu[i]
                else:
                    I = f[i] + (-nu[i])
                s = Is[i] + I
                if s >= I0:
                    Is[i] = I0 - alpha
                elif s < -I0:
                    Is[i] = -I0
                else:
                    Is[i] = s
                old[i] = sigma[i]
                sigma[i] = 1 if Is[i] >= 0.0 else -1
            if incremental or trace_e:
                if incremental:
                    for j in range(n):
                        new = sigma[j]
                        if new != old[j]:
                            delta = 2.0 * <double>new
                            for k in range(indptr[j], indptr[j + 1]):
                                f[indices[k]] += delta * data[k]
                else:
                    _full_fields(indptr, indices, data, h, sigma, f)
                if trace_e:
                    energy_trace[t] = _energy_from_fields(h, sigma, f)
            if trace_i0:
                i0_trace[t] = I0
            I0_last = I0
            if t < cycles - 1:
                I0 = I0 / beta
    return I0_last


def sa_run(const int64_t[::1] indptr, const int64_t[::1] indices, const double[::1] data,
           const double[::1] h, int8_t[::1] sigma, const int64_t[::1] spins,
           const double[::1] uniforms, double T, double dIT, double energy0,
           double[::1] energy_trace=None, double[::1] temp_trace=None,
           int8_t[::1] accept_trace=None):
    """Single-flip Metropolis annealing, one attempt per cycle, in place on ``sigma``.

    Returns ``(energy, accepted)`` where energy is tracked through flip deltas.
    """
    cdef Py_ssize_t cycles = spins.shape[0]
    cdef Py_ssize_t t, k, i
    cdef double acc, dE, E = energy0
    cdef Py_ssize_t accepted = 0
    cdef bint trace_e = energy_trace is not None
    cdef bint trace_t = temp_trace is not None
    cdef bint trace_a = accept_trace is not None
    cdef int8_t took

    with nogil:
        for t in range(cycles):
            i = spins[t]
            acc = 0.0
            for k in range(indptr[i], indptr[i + 1]):
                acc = acc + data[k] * <double>sigma[indices[k]]
            dE = 2.0 * <double>sigma[i] * (h[i] + acc)
            took = 0
            if dE <= 0.0 or uniforms[t] < exp(-dE / T):
                sigma[i] = -sigma[i]
                E = E + dE
                accepted += 1
                took = 1
            if trace_a:
                accept_trace[t] = took
            if trace_e:
                energy_trace[t] = E
            if trace_t:
                temp_trace[t] = T
            T = 1.0 / (1.0 / T + dIT)
    return E, accepted

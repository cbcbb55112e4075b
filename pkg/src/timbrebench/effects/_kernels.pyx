# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled DSP hot loops: biquad cascade, modulated comb bank, all-pass chain.

Contracts match timbrebench.effects._fallback exactly.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport ceil, floor, sin

cnp.import_array()


def biquad_cascade(x, sos):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xin = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] s = np.ascontiguousarray(sos, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = xin.copy()
    cdef Py_ssize_t n = xin.shape[0]
    cdef Py_ssize_t n_sections = s.shape[0]
    cdef Py_ssize_t k, i
    cdef double b0, b1, b2, a1, a2, s1, s2, xi, yi

    for k in range(n_sections):
        b0 = s[k, 0] / s[k, 3]
        b1 = s[k, 1] / s[k, 3]
        b2 = s[k, 2] / s[k, 3]
        a1 = s[k, 4] / s[k, 3]
        a2 = s[k, 5] / s[k, 3]
        s1 = 0.0
        s2 = 0.0
        # Direct form II transposed
        for i in range(n):
            xi = y[i]
            yi = b0 * xi + s1
            s1 = b1 * xi - a1 * yi + s2
            s2 = b2 * xi - a2 * yi
            y[i] = yi
    return y


def comb_bank(x, delays, gains, lp_coefs, double mod_depth, double mod_rate, phases):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xin = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] d = np.ascontiguousarray(delays, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(gains, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.ascontiguousarray(lp_coefs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ph = np.ascontiguousarray(phases, dtype=np.float64)

    cdef Py_ssize_t n = xin.shape[0]
    cdef Py_ssize_t n_combs = d.shape[0]
    cdef Py_ssize_t max_delay = 0
    cdef Py_ssize_t k, i, lo, hi, write
    for k in range(n_combs):
        if d[k] > max_delay:
            max_delay = d[k]
    max_delay += <Py_ssize_t>ceil(mod_depth) + 2

    cdef cnp.ndarray[cnp.float64_t, ndim=2] bufs = np.zeros((n_combs, max_delay))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lp = np.zeros(n_combs)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n)
    cdef double tap, read, frac, yk, acc
    cdef bint modulated = mod_depth != 0.0 and mod_rate != 0.0

    write = 0
    for i in range(n):
        acc = 0.0
        for k in range(n_combs):
            if modulated:
                tap = d[k] + mod_depth * sin(mod_rate * i + ph[k])
            else:
                tap = d[k]
            read = write - tap
            while read < 0:
                read += max_delay
            lo = <Py_ssize_t>floor(read)
            frac = read - lo
            hi = lo + 1
            if hi >= max_delay:
                hi -= max_delay
            if lo >= max_delay:
                lo -= max_delay
            yk = bufs[k, lo] * (1.0 - frac) + bufs[k, hi] * frac
            lp[k] = yk * (1.0 - c[k]) + lp[k] * c[k]
            bufs[k, write] = xin[i] + g[k] * lp[k]
            acc += yk
        out[i] = acc
        write += 1
        if write >= max_delay:
            write = 0
    return out


def allpass_chain(x, delays, double gain):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.array(x, dtype=np.float64, copy=True)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] d = np.ascontiguousarray(delays, dtype=np.int64)
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t n_stages = d.shape[0]
    cdef Py_ssize_t k, i, idx, dd
    cdef double xi, delayed
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xbuf
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ybuf

    for k in range(n_stages):
        dd = d[k]
        xbuf = np.zeros(dd)
        ybuf = np.zeros(dd)
        idx = 0
        for i in range(n):
            xi = y[i]
            delayed = xbuf[idx] + gain * ybuf[idx]
            y[i] = -gain * xi + delayed
            xbuf[idx] = xi
            ybuf[idx] = y[i]
            idx += 1
            if idx >= dd:
                idx = 0
    return y

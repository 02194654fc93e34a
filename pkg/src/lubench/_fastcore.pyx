# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernel: batched forward pass of the interval network.

Same contract as the pure-python fallback in ``_pycore.py``.
"""

from libc.math cimport exp, tanh

import numpy as np

cimport numpy as cnp

cnp.import_array()

ACT_TANH = 0
ACT_LOGISTIC = 1


def forward_batch(cnp.ndarray[cnp.float64_t, ndim=1] weights,
                  cnp.ndarray[cnp.float64_t, ndim=2] X,
                  int hidden, int activation):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t h = hidden
    if activation != 0 and activation != 1:
        raise ValueError(f"unknown activation code {activation}")
    if weights.shape[0] != h * d + h + 2 * h + 2:
        raise ValueError("weight vector length does not match architecture")

    cdef cnp.ndarray[cnp.float64_t, ndim=1] lower = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] upper = np.empty(n)
    cdef double[::1] w = np.ascontiguousarray(weights)
    cdef double[:, ::1] x = np.ascontiguousarray(X)
    cdef double[::1] lo = lower
    cdef double[::1] up = upper

    cdef Py_ssize_t b1_off = h * d
    cdef Py_ssize_t w2_off = b1_off + h
    cdef Py_ssize_t b2_off = w2_off + 2 * h
    cdef Py_ssize_t i, j, k
    cdef double pre, a, out0, out1

    with nogil:
        for i in range(n):
            out0 = w[b2_off]
            out1 = w[b2_off + 1]
            for j in range(h):
                pre = w[b1_off + j]
                for k in range(d):
                    pre += w[j * d + k] * x[i, k]
                if activation == 0:
                    a = tanh(pre)
                else:
                    a = 1.0 / (1.0 + exp(-pre))
                out0 += w[w2_off + j] * a
                out1 += w[w2_off + h + j] * a
            lo[i] = out0
            up[i] = out1
    return lower, upper


def pi_stats(cnp.ndarray[cnp.float64_t, ndim=1] targets,
             cnp.ndarray[cnp.float64_t, ndim=1] lower,
             cnp.ndarray[cnp.float64_t, ndim=1] upper):
    """One-pass batch summary; same contract as the fallback in _pycore."""
    cdef Py_ssize_t n = targets.shape[0]
    cdef double[::1] t = np.ascontiguousarray(targets)
    cdef double[::1] lo = np.ascontiguousarray(lower)
    cdef double[::1] up = np.ascontiguousarray(upper)

    cdef Py_ssize_t cov = 0, miss = 0
    cdef double clamped = 0.0, raw_sum = 0.0, fail = 0.0, mid_sq = 0.0
    cdef double below = 0.0, above = 0.0
    cdef double l, u, ti, a, b, raw, d1, d2, dev
    cdef Py_ssize_t i

    with nogil:
        for i in range(n):
            l = lo[i]
            u = up[i]
            ti = t[i]
            raw = u - l
            raw_sum += raw
            if raw > 0.0:
                clamped += raw
                a = l
                b = u
            else:
                a = u
                b = l
            dev = ti - 0.5 * (u + l)
            mid_sq += dev * dev
            if l - ti > 0.0:
                below += l - ti
            if ti - u > 0.0:
                above += ti - u
            if a <= ti <= b:
                cov += 1
            else:
                miss += 1
                d1 = ti - u
                if d1 < 0.0:
                    d1 = -d1
                d2 = l - ti
                if d2 < 0.0:
                    d2 = -d2
                fail += d1 if d1 < d2 else d2
    return cov, clamped, raw_sum, fail, miss, mid_sq, below, above

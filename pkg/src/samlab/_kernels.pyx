# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled array kernels for the autodiff hot path.

Every reduction accumulates in strict index-ascending order, so results are
bitwise reproducible run-to-run and machine-to-machine (same float env).
All arrays are C-contiguous float64; labels are int64.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp as c_exp
from libc.math cimport log as c_log
from libc.math cimport tanh as c_tanh

NAME = "compiled"


def matmul(const double[:, ::1] a, const double[:, ::1] b):
    cdef Py_ssize_t m = a.shape[0], k = a.shape[1], n = b.shape[1]
    if b.shape[0] != k:
        raise ValueError(f"matmul shape mismatch: {(m, k)} @ {(b.shape[0], n)}")
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, p
    cdef double acc
    for i in range(m):
        for j in range(n):
            acc = 0.0
            for p in range(k):
                acc += a[i, p] * b[p, j]
            o[i, j] = acc
    return out


def transpose(const double[:, ::1] a):
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(n):
            o[j, i] = a[i, j]
    return out


cdef inline object _flat(a):
    return np.ravel(a)  # view: inputs are C-contiguous


def add(a, b):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a), y = _flat(b)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = x[i] + y[i]
    return out


def sub(a, b):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a), y = _flat(b)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = x[i] - y[i]
    return out


def mul(a, b):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a), y = _flat(b)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = x[i] * y[i]
    return out


def div(a, b):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a), y = _flat(b)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = x[i] / y[i]
    return out


def neg(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = -x[i]
    return out


def scale(a, double c):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = c * x[i]
    return out


def exp(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = c_exp(x[i])
    return out


def log(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = c_log(x[i])
    return out


def tanh(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = c_tanh(x[i])
    return out


def relu(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = x[i] if x[i] > 0.0 else 0.0
    return out


def gtz_mask(a):
    out = np.empty_like(a)
    cdef const double[::1] x = _flat(a)
    cdef double[::1] o = _flat(out)
    cdef Py_ssize_t i
    for i in range(x.shape[0]):
        o[i] = 1.0 if x[i] > 0.0 else 0.0
    return out


def add_bias(const double[:, ::1] z, const double[::1] b):
    cdef Py_ssize_t m = z.shape[0], n = z.shape[1]
    if b.shape[0] != n:
        raise ValueError(f"bias length {b.shape[0]} != {n} columns")
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(n):
            o[i, j] = z[i, j] + b[j]
    return out


def rowsum(const double[:, ::1] z):
    cdef Py_ssize_t m = z.shape[0], n = z.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += z[i, j]
        o[i] = acc
    return out


def colsum(const double[:, ::1] z):
    cdef Py_ssize_t m = z.shape[0], n = z.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += z[i, j]
        o[j] = acc
    return out


def sum_all(a):
    cdef const double[::1] x = _flat(a)
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(x.shape[0]):
        acc += x[i]
    return acc


def dot(a, b):
    cdef const double[::1] x = _flat(a), y = _flat(b)
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(x.shape[0]):
        acc += x[i] * y[i]
    return acc


def rowmax(const double[:, ::1] z):
    cdef Py_ssize_t m = z.shape[0], n = z.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double best
    for i in range(m):
        best = z[i, 0]
        for j in range(1, n):
            if z[i, j] > best:
                best = z[i, j]
        o[i] = best
    return out


def bcol(const double[::1] v, Py_ssize_t n):
    """Broadcast a length-m vector across n columns -> (m, n)."""
    cdef Py_ssize_t m = v.shape[0]
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(n):
            o[i, j] = v[i]
    return out


def brow(const double[::1] v, Py_ssize_t m):
    """Broadcast a length-n vector across m rows -> (m, n)."""
    cdef Py_ssize_t n = v.shape[0]
    out = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(n):
            o[i, j] = v[j]
    return out


def fill(double c, shape):
    return np.full(shape, c, dtype=np.float64)


def take_label(const double[:, ::1] z, const cnp.int64_t[::1] labels):
    cdef Py_ssize_t m = z.shape[0]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i
    for i in range(m):
        o[i] = z[i, labels[i]]
    return out


def put_label(const double[::1] v, const cnp.int64_t[::1] labels, Py_ssize_t k):
    cdef Py_ssize_t m = v.shape[0]
    out = np.zeros((m, k), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i
    for i in range(m):
        o[i, labels[i]] += v[i]
    return out

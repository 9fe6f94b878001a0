"""Pure-numpy kernels, API-identical to the compiled extension.

numpy reductions use pairwise summation rather than the compiled backend's
strict index-ascending order; both are deterministic run-to-run, but the two
backends can differ in the last few ulps. No test compares backends bitwise.
"""

import numpy as np

NAME = "python"


def matmul(a, b):
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return a @ b


def transpose(a):
    return np.ascontiguousarray(a.T)


def add(a, b):
    return a + b


def sub(a, b):
    return a - b


def mul(a, b):
    return a * b


def div(a, b):
    return a / b


def neg(a):
    return -a


def scale(a, c):
    return c * a


def exp(a):
    return np.exp(a)


def log(a):
    return np.log(a)


def tanh(a):
    return np.tanh(a)


def relu(a):
    return np.maximum(a, 0.0)


def gtz_mask(a):
    return (a > 0.0).astype(np.float64)


def add_bias(z, b):
    if b.shape[0] != z.shape[1]:
        raise ValueError(f"bias length {b.shape[0]} != {z.shape[1]} columns")
    return z + b


def rowsum(z):
    return z.sum(axis=1)


def colsum(z):
    return z.sum(axis=0)


def sum_all(a):
    return float(np.sum(a))


def dot(a, b):
    return float(np.dot(np.ravel(a), np.ravel(b)))


def rowmax(z):
    return z.max(axis=1)


def bcol(v, n):
    return np.repeat(v[:, None], n, axis=1)


def brow(v, m):
    return np.repeat(v[None, :], m, axis=0)


def fill(c, shape):
    return np.full(shape, c, dtype=np.float64)


def take_label(z, labels):
    return z[np.arange(z.shape[0]), labels]


def put_label(v, labels, k):
    out = np.zeros((v.shape[0], k), dtype=np.float64)
    out[np.arange(v.shape[0]), labels] = v
    return out

"""Reverse-mode automatic differentiation over dense float64 arrays.

A ``Var`` wraps an ndarray and remembers how it was produced. Every VJP is
expressed through the same traced primitives, so the backward pass itself
builds a differentiable graph: running :func:`backward` on a scalar formed
from first-order gradients yields exact Hessian-vector products (reverse-over-
reverse).

Array math is delegated to the active kernel backend (see
:mod:`samlab.kernels`); this module owns only graph construction and the
deterministic accumulation order of the backward sweep.
"""

import numpy as np

from samlab import kernels as K


class Var:
    """Graph node: an array value plus the VJP closures of its parents."""

    __slots__ = ("value", "parents", "vjps")

    def __init__(self, value, parents=(), vjps=()):
        self.value = value
        self.parents = parents
        self.vjps = vjps

    @property
    def shape(self):
        return self.value.shape


def const(value):
    """Leaf holding ``value`` (no gradient flows into it)."""
    return Var(np.asarray(value, dtype=np.float64))


def leaf(value):
    """Differentiable leaf; value must already be contiguous float64."""
    arr = np.ascontiguousarray(value, dtype=np.float64)
    return Var(arr)


# -- primitives --------------------------------------------------------------
# Each op computes its value through the kernel backend and registers VJPs
# built from these same ops, keeping the graph closed under differentiation.


def add(a, b):
    return Var(K.add(a.value, b.value), (a, b), (lambda ct: ct, lambda ct: ct))


def sub(a, b):
    return Var(K.sub(a.value, b.value), (a, b), (lambda ct: ct, neg))


def neg(a):
    return Var(K.neg(a.value), (a,), (neg,))


def mul(a, b):
    return Var(
        K.mul(a.value, b.value),
        (a, b),
        (lambda ct: mul(ct, b), lambda ct: mul(ct, a)),
    )


def div(a, b):
    out = Var(K.div(a.value, b.value), (a, b), ())
    out.vjps = (
        lambda ct: div(ct, b),
        lambda ct: neg(div(mul(ct, out), b)),
    )
    return out


def scale(a, c):
    c = float(c)
    return Var(K.scale(a.value, c), (a,), (lambda ct: scale(ct, c),))


def matmul(a, b):
    return Var(
        K.matmul(a.value, b.value),
        (a, b),
        (
            lambda ct: matmul(ct, transpose(b)),
            lambda ct: matmul(transpose(a), ct),
        ),
    )


def transpose(a):
    return Var(K.transpose(a.value), (a,), (transpose,))


def exp(a):
    out = Var(K.exp(a.value), (a,), ())
    out.vjps = (lambda ct: mul(ct, out),)
    return out


def log(a):
    return Var(K.log(a.value), (a,), (lambda ct: div(ct, a),))


def tanh(a):
    out = Var(K.tanh(a.value), (a,), ())
    # d tanh = 1 - tanh^2; traced through `out` so second derivatives work
    out.vjps = (lambda ct: mul(ct, sub(const(np.ones_like(out.value)), mul(out, out))),)
    return out


def relu(a):
    mask = const(K.gtz_mask(a.value))  # constant a.e.-derivative
    return Var(K.relu(a.value), (a,), (lambda ct: mul(ct, mask),))


def add_bias(z, b):
    """(m, n) + (n,) row broadcast."""
    return Var(K.add_bias(z.value, b.value), (z, b), (lambda ct: ct, colsum))


def rowsum(z):
    n = z.value.shape[1]
    return Var(K.rowsum(z.value), (z,), (lambda ct: bcol(ct, n),))


def colsum(z):
    m = z.value.shape[0]
    return Var(K.colsum(z.value), (z,), (lambda ct: brow(ct, m),))


def sum_all(a):
    shape = a.value.shape
    return Var(np.asarray(K.sum_all(a.value)), (a,), (lambda ct: fill(ct, shape),))


def fill(c, shape):
    """Broadcast a 0-d Var to ``shape``."""
    return Var(K.fill(float(c.value), shape), (c,), (sum_all,))


def bcol(v, n):
    """(m,) -> (m, n), replicating across columns."""
    return Var(K.bcol(v.value, n), (v,), (rowsum,))


def brow(v, m):
    """(n,) -> (m, n), replicating across rows."""
    return Var(K.brow(v.value, m), (v,), (colsum,))


def rowmax_detached(z):
    """Per-row max as a constant (used to stabilize logsumexp)."""
    return const(K.rowmax(z.value))


def take_label(z, labels):
    k = z.value.shape[1]
    return Var(
        K.take_label(z.value, labels),
        (z,),
        (lambda ct: put_label(ct, labels, k),),
    )


def put_label(v, labels, k):
    return Var(
        K.put_label(v.value, labels, k),
        (v,),
        (lambda ct: take_label(ct, labels),),
    )


def dot(a, b):
    return sum_all(mul(a, b))


# -- backward sweep ----------------------------------------------------------


def _topo_order(root):
    order = []
    seen = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        # reversed so parents are visited left-to-right in the emitted order
        for p in reversed(node.parents):
            if id(p) not in seen:
                stack.append((p, False))
    return order


def backward(out, seed=None):
    """Cotangents of every node reachable from ``out``, keyed by id.

    ``out`` must be scalar unless ``seed`` supplies the output cotangent.
    The returned values are Vars, so they can be differentiated again.
    Accumulation happens in reverse topological order with parents visited
    in their declared order, which makes the result deterministic.
    """
    if seed is None:
        seed = const(np.ones_like(out.value))
    cot = {id(out): seed}
    for node in reversed(_topo_order(out)):
        ct = cot.get(id(node))
        if ct is None:
            continue
        for parent, vjp in zip(node.parents, node.vjps):
            contrib = vjp(ct)
            prev = cot.get(id(parent))
            cot[id(parent)] = contrib if prev is None else add(prev, contrib)
    return cot


def grad_of(out, leaves, seed=None):
    """Cotangent Vars for ``leaves`` (zeros where no path exists)."""
    cot = backward(out, seed)
    return [
        cot.get(id(leaf)) or const(np.zeros_like(leaf.value)) for leaf in leaves
    ]

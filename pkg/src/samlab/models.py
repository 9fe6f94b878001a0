"""Small feed-forward models over flattened parameter vectors.

A model is a stack of affine layers with relu/tanh between them and either a
softmax-cross-entropy head (integer labels) or a mean-squared-error head
(float targets). The batch loss is the mean of per-example losses; for MSE
the per-example loss is the *sum* of squared output errors, so a biasless
linear least-squares model has Hessian (2/n) X^T X.

Parameter packing order is layer-major: for each layer, W (fan_in x fan_out,
row-major) then b. This ordering is part of the public contract.
"""

from dataclasses import dataclass

import numpy as np

from samlab import autodiff as ad
from samlab.errors import NonFiniteError, ShapeError

ACTIVATIONS = ("relu", "tanh")
HEADS = ("softmax-cross-entropy", "mean-squared-error")


@dataclass(frozen=True)
class ModelSpec:
    """Architecture: ``widths`` = [input, hidden..., output].

    A two-entry ``widths`` list is a plain (generalized) linear model.
    ``bias=False`` drops all bias terms; tests use it to realize exact
    quadratic losses.
    """

    widths: tuple
    activation: str = "tanh"
    head: str = "softmax-cross-entropy"
    bias: bool = True

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        if len(self.widths) < 2:
            raise ShapeError("widths needs at least [input, output]")
        if any(w <= 0 for w in self.widths):
            raise ShapeError(f"widths must be positive, got {self.widths}")
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.head not in HEADS:
            raise ValueError(f"head must be one of {HEADS}")

    @property
    def num_layers(self):
        return len(self.widths) - 1

    def param_count(self):
        extra = 1 if self.bias else 0
        return sum(
            (fi + extra) * fo for fi, fo in zip(self.widths[:-1], self.widths[1:])
        )


def as_params(spec, values):
    """Validated parameter vector: contiguous float64, finite, length d."""
    v = np.ascontiguousarray(values, dtype=np.float64).reshape(-1)
    d = spec.param_count()
    if v.size != d:
        raise ShapeError(f"parameter vector has length {v.size}, model needs {d}")
    if not np.all(np.isfinite(v)):
        raise NonFiniteError("parameter vector contains non-finite entries")
    return v


def init_params(spec, seed):
    """Seeded Gaussian init, std 1/sqrt(fan_in) per layer, zero biases."""
    rng = np.random.default_rng(seed)
    parts = []
    for fi, fo in zip(spec.widths[:-1], spec.widths[1:]):
        parts.append(rng.normal(0.0, 1.0 / np.sqrt(fi), size=(fi, fo)).ravel())
        if spec.bias:
            parts.append(np.zeros(fo))
    return np.concatenate(parts)


def unpack_params(spec, params):
    """Parameter vector -> list of (W, b) pairs (b is None when bias=False)."""
    v = as_params(spec, params)
    layers = []
    pos = 0
    for fi, fo in zip(spec.widths[:-1], spec.widths[1:]):
        w = v[pos : pos + fi * fo].reshape(fi, fo)
        pos += fi * fo
        b = None
        if spec.bias:
            b = v[pos : pos + fo]
            pos += fo
        layers.append((w, b))
    return layers


def pack_params(spec, layers):
    """Inverse of :func:`unpack_params`; bitwise round-trip."""
    parts = []
    for idx, (w, b) in enumerate(layers):
        fi, fo = spec.widths[idx], spec.widths[idx + 1]
        if w.shape != (fi, fo):
            raise ShapeError(f"layer {idx}: W has shape {w.shape}, expected {(fi, fo)}")
        parts.append(np.ravel(w))
        if spec.bias:
            if b is None or b.shape != (fo,):
                raise ShapeError(f"layer {idx}: bias has wrong shape")
            parts.append(b)
    return np.concatenate(parts)


def _check_batch(spec, x, y):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ShapeError(f"batch features must be 2-d, got shape {x.shape}")
    if x.shape[0] == 0:
        raise ShapeError("batch is empty")
    if x.shape[1] != spec.widths[0]:
        raise ShapeError(
            f"layer 0 expects {spec.widths[0]} input features, batch has {x.shape[1]}"
        )
    out = spec.widths[-1]
    if spec.head == "softmax-cross-entropy":
        y = np.ascontiguousarray(y, dtype=np.int64).reshape(-1)
        if y.shape[0] != x.shape[0]:
            raise ShapeError("labels length does not match batch size")
        if y.size and (y.min() < 0 or y.max() >= out):
            raise ShapeError(f"labels must lie in [0, {out})")
    else:
        y = np.ascontiguousarray(y, dtype=np.float64)
        if y.ndim == 1:
            y = y.reshape(-1, 1)
        if y.shape != (x.shape[0], out):
            raise ShapeError(
                f"targets must have shape {(x.shape[0], out)}, got {y.shape}"
            )
    return x, y


def _loss_graph(spec, layer_vars, x, y):
    """Traced batch loss; returns (loss Var, logits Var)."""
    a = ad.const(x)
    last = spec.num_layers - 1
    for idx, (w, b) in enumerate(layer_vars):
        z = ad.matmul(a, w)
        if b is not None:
            z = ad.add_bias(z, b)
        a = z if idx == last else (ad.tanh(z) if spec.activation == "tanh" else ad.relu(z))
    batch = x.shape[0]
    if spec.head == "softmax-cross-entropy":
        m = ad.rowmax_detached(a)
        shifted = ad.sub(a, ad.bcol(m, spec.widths[-1]))
        lse = ad.add(m, ad.log(ad.rowsum(ad.exp(shifted))))
        per_example = ad.sub(lse, ad.take_label(a, y))
        loss = ad.scale(ad.sum_all(per_example), 1.0 / batch)
    else:
        r = ad.sub(a, ad.const(y))
        loss = ad.scale(ad.sum_all(ad.mul(r, r)), 1.0 / batch)
    return loss, a


def _leaf_layers(spec, params):
    layers = unpack_params(spec, params)
    return [
        (ad.leaf(w), ad.leaf(b) if b is not None else None) for w, b in layers
    ]


def _flat_leaves(layer_vars):
    out = []
    for w, b in layer_vars:
        out.append(w)
        if b is not None:
            out.append(b)
    return out


def _raise_if_nonfinite(spec, layer_vars, x, loss_value):
    if np.isfinite(loss_value):
        return
    # rerun layer by layer to name the first offender in the error
    a = x
    for idx, (w, b) in enumerate(layer_vars):
        a = a @ w.value
        if b is not None:
            a = a + b.value
        if not np.all(np.isfinite(a)):
            raise NonFiniteError(f"non-finite activation in layer {idx} (overflow)")
        if idx < spec.num_layers - 1:
            a = np.tanh(a) if spec.activation == "tanh" else np.maximum(a, 0.0)
    raise NonFiniteError("non-finite loss (overflow in the head)")


def forward_loss(spec, params, x, y):
    """Mean per-example loss over the batch."""
    x, y = _check_batch(spec, x, y)
    layer_vars = _leaf_layers(spec, params)
    loss, _ = _loss_graph(spec, layer_vars, x, y)
    val = float(loss.value)
    _raise_if_nonfinite(spec, layer_vars, x, val)
    return val


def value_and_grad(spec, params, x, y):
    x, y = _check_batch(spec, x, y)
    layer_vars = _leaf_layers(spec, params)
    loss, _ = _loss_graph(spec, layer_vars, x, y)
    val = float(loss.value)
    _raise_if_nonfinite(spec, layer_vars, x, val)
    leaves = _flat_leaves(layer_vars)
    cots = ad.grad_of(loss, leaves)
    return val, np.concatenate([np.ravel(c.value) for c in cots])


def grad(spec, params, x, y):
    """Gradient of the batch loss w.r.t. the packed parameter vector."""
    return value_and_grad(spec, params, x, y)[1]


def hvp(spec, params, x, y, v):
    """Exact Hessian-vector product via reverse-over-reverse.

    Differentiates the scalar <grad, v> with v held constant; linear in v up
    to float rounding.
    """
    x, y = _check_batch(spec, x, y)
    v = as_params(spec, v)
    layer_vars = _leaf_layers(spec, params)
    loss, _ = _loss_graph(spec, layer_vars, x, y)
    _raise_if_nonfinite(spec, layer_vars, x, float(loss.value))
    leaves = _flat_leaves(layer_vars)
    gs = ad.grad_of(loss, leaves)

    pos = 0
    s = None
    for leaf_var, g in zip(leaves, gs):
        n = leaf_var.value.size
        v_part = ad.const(v[pos : pos + n].reshape(leaf_var.value.shape))
        pos += n
        term = ad.dot(g, v_part)
        s = term if s is None else ad.add(s, term)
    cots = ad.grad_of(s, leaves)
    return np.concatenate([np.ravel(c.value) for c in cots])


def predict_logits(spec, params, x):
    """Raw head inputs (logits / regression outputs) for evaluation."""
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != spec.widths[0]:
        raise ShapeError(
            f"layer 0 expects {spec.widths[0]} input features, got shape {x.shape}"
        )
    a = x
    layers = unpack_params(spec, params)
    for idx, (w, b) in enumerate(layers):
        a = a @ w
        if b is not None:
            a = a + b
        if idx < spec.num_layers - 1:
            a = np.tanh(a) if spec.activation == "tanh" else np.maximum(a, 0.0)
    return a


def accuracy(spec, params, x, y):
    logits = predict_logits(spec, params, x)
    pred = np.argmax(logits, axis=1)
    return float(np.mean(pred == np.asarray(y, dtype=np.int64)))

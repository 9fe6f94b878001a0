"""Kernel backend selection.

The compiled Cython extension is used when importable; otherwise the numpy
fallback. Set SAMLAB_KERNELS=compiled|python to force one (``compiled`` raises
if the extension is missing). Callers must access kernels as module
attributes (``kernels.matmul(...)``), not via ``from kernels import matmul``,
so that ``set_backend`` switches take effect.
"""

import os

from samlab import _kernels_py

_API = [
    "matmul",
    "transpose",
    "add",
    "sub",
    "mul",
    "div",
    "neg",
    "scale",
    "exp",
    "log",
    "tanh",
    "relu",
    "gtz_mask",
    "add_bias",
    "rowsum",
    "colsum",
    "sum_all",
    "dot",
    "rowmax",
    "bcol",
    "brow",
    "fill",
    "take_label",
    "put_label",
]

BACKEND = "python"


def _load(name):
    if name == "python":
        return _kernels_py
    try:
        from samlab import _kernels
    except ImportError:
        if name == "compiled":
            raise
        return _kernels_py
    return _kernels


def set_backend(name="auto"):
    """Bind all kernel functions to one implementation; returns its name."""
    if name not in ("auto", "compiled", "python"):
        raise ValueError(f"unknown kernel backend {name!r}")
    impl = _load(name)
    g = globals()
    for fn in _API:
        g[fn] = getattr(impl, fn)
    g["BACKEND"] = impl.NAME
    return impl.NAME


def available_backends():
    names = ["python"]
    try:
        from samlab import _kernels  # noqa: F401

        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


set_backend(os.environ.get("SAMLAB_KERNELS", "auto"))

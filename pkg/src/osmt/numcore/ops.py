"""Differentiable operation catalog.

Every op takes and returns :class:`Tensor` objects, validates shapes up
front, and records itself on the active tape together with a closure that
maps output gradients to input gradients. ``forward_op`` exposes the public
catalog by name; a few shape-plumbing ops (reshape, stack, fused lstm_cell)
exist beyond it for the model's internal use.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from ..errors import ConfigError, ShapeError
from .tensor import Tensor, record


def _unbroadcast(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` over axes that were broadcast up from ``shape``."""
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad


def _out(data, inputs, vjp) -> Tensor:
    out = Tensor(data, requires_grad=any(t.requires_grad for t in inputs))
    record((out,), inputs, vjp)
    return out


def matmul(a: Tensor, b: Tensor) -> Tensor:
    """Matrix product with numpy batching semantics; operands must be >= 2-D."""
    if a.data.ndim < 2 or b.data.ndim < 2:
        raise ShapeError(f"matmul: operands must be >=2-D, got {a.shape} @ {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeError(f"matmul: inner dims disagree, {a.shape} @ {b.shape}")
    try:
        out = np.matmul(a.data, b.data)
    except ValueError as exc:
        raise ShapeError(f"matmul: {a.shape} @ {b.shape}: {exc}") from None

    def vjp(g):
        da = _unbroadcast(np.matmul(g, b.data.swapaxes(-1, -2)), a.shape)
        db = _unbroadcast(np.matmul(a.data.swapaxes(-1, -2), g), b.shape)
        return da, db

    return _out(out, (a, b), vjp)


def add(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise sum with broadcasting."""
    try:
        out = a.data + b.data
    except ValueError:
        raise ShapeError(f"add: shapes {a.shape} and {b.shape} do not broadcast") from None

    def vjp(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _out(out, (a, b), vjp)


def mul(a: Tensor, b: Tensor) -> Tensor:
    """Elementwise (Hadamard) product with broadcasting."""
    try:
        out = a.data * b.data
    except ValueError:
        raise ShapeError(f"mul_elementwise: shapes {a.shape} and {b.shape} do not broadcast") from None

    def vjp(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return _out(out, (a, b), vjp)


def concat_last_axis(tensors) -> Tensor:
    tensors = list(tensors)
    if not tensors:
        raise ShapeError("concat_last_axis: need at least one input")
    lead = tensors[0].shape[:-1]
    for t in tensors[1:]:
        if t.shape[:-1] != lead:
            raise ShapeError(
                f"concat_last_axis: leading dims disagree, {[t.shape for t in tensors]}"
            )
    out = np.concatenate([t.data for t in tensors], axis=-1)
    widths = [t.shape[-1] for t in tensors]

    def vjp(g):
        grads = []
        start = 0
        for w in widths:
            grads.append(g[..., start : start + w])
            start += w
        return tuple(grads)

    return _out(out, tuple(tensors), vjp)


def tanh(x: Tensor) -> Tensor:
    out = np.tanh(x.data)

    def vjp(g):
        return (g * (1.0 - out * out),)

    return _out(out, (x,), vjp)


def sigmoid(x: Tensor) -> Tensor:
    out = np.empty_like(x.data)
    pos = x.data >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x.data[pos]))
    ex = np.exp(x.data[~pos])
    out[~pos] = ex / (1.0 + ex)

    def vjp(g):
        return (g * out * (1.0 - out),)

    return _out(out, (x,), vjp)


def softmax_last_axis(x: Tensor, mask=None) -> Tensor:
    """Softmax over the last axis; positions where ``mask`` is 0 get weight 0.

    mask, when given, is an array broadcastable to x's shape. Rows with no
    unmasked position are an error.
    """
    logits = x.data
    if mask is not None:
        mask = np.broadcast_to(np.asarray(mask, dtype=np.float64), logits.shape)
        if not (mask.sum(axis=-1) > 0).all():
            raise ShapeError("softmax_last_axis: some rows are fully masked")
        logits = np.where(mask > 0, logits, -np.inf)
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exps = np.exp(shifted)
    out = exps / exps.sum(axis=-1, keepdims=True)

    def vjp(g):
        dot = (g * out).sum(axis=-1, keepdims=True)
        return (out * (g - dot),)

    return _out(out, (x,), vjp)


def embedding_lookup(table: Tensor, ids) -> Tensor:
    """Row gather: ids of any integer shape index the table's first axis."""
    ids = np.asarray(ids)
    if table.data.ndim != 2:
        raise ShapeError(f"embedding_lookup: table must be 2-D, got {table.shape}")
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise IndexError(
            f"embedding_lookup: id out of range for table of {table.shape[0]} rows"
        )
    out = table.data[ids]

    def vjp(g):
        dtable = np.zeros_like(table.data)
        np.add.at(dtable, ids, g)
        return (dtable,)

    return _out(out, (table,), vjp)


def dropout(x: Tensor, keep_prob: float, rng: np.random.Generator | None = None, train: bool = False) -> Tensor:
    """Inverted dropout: zero entries with probability ``1 - keep_prob`` and
    scale survivors by ``1/keep_prob``. Identity outside training."""
    if not 0.0 < keep_prob <= 1.0:
        raise ConfigError(f"dropout: keep_prob must be in (0, 1], got {keep_prob}")
    if not train or keep_prob == 1.0:
        return x
    if rng is None:
        raise ConfigError("dropout: training mode requires an RNG stream")
    mask = (rng.random(x.shape) < keep_prob).astype(np.float64) / keep_prob
    out = x.data * mask

    def vjp(g):
        return (g * mask,)

    return _out(out, (x,), vjp)


def cross_entropy_with_mask(logits: Tensor, targets, mask, reduction: str = "mean") -> Tensor:
    """Masked token-level negative log-likelihood, summed or averaged.

    logits: (..., classes); targets: integer ids of shape logits.shape[:-1];
    mask: 0/1 array of the same shape as targets. ``mean`` divides by the
    number of unmasked positions.
    """
    targets = np.asarray(targets)
    mask_arr = np.asarray(mask, dtype=np.float64)
    nclass = logits.shape[-1]
    if targets.shape != logits.shape[:-1]:
        raise ShapeError(
            f"cross_entropy_with_mask: targets {targets.shape} vs logits {logits.shape}"
        )
    if mask_arr.shape != targets.shape:
        raise ShapeError(
            f"cross_entropy_with_mask: mask {mask_arr.shape} vs targets {targets.shape}"
        )
    if targets.size and (targets.min() < 0 or targets.max() >= nclass):
        raise IndexError(
            f"cross_entropy_with_mask: target id out of range for {nclass} classes"
        )
    if reduction not in ("mean", "sum"):
        raise ConfigError(f"cross_entropy_with_mask: unknown reduction {reduction!r}")

    z = logits.data
    zmax = z.max(axis=-1, keepdims=True)
    exps = np.exp(z - zmax)
    sumexp = exps.sum(axis=-1, keepdims=True)
    logprobs = (z - zmax) - np.log(sumexp)
    picked = np.take_along_axis(logprobs, targets[..., None], axis=-1)[..., 0]
    total = float(mask_arr.sum())
    if reduction == "mean" and total == 0.0:
        raise ShapeError("cross_entropy_with_mask: mask selects no positions")
    loss = -(picked * mask_arr).sum()
    scale = 1.0 / total if reduction == "mean" else 1.0
    out = np.asarray(loss * scale)

    def vjp(g):
        probs = exps / sumexp
        onehot = np.zeros_like(probs)
        np.put_along_axis(onehot, targets[..., None], 1.0, axis=-1)
        dlogits = (probs - onehot) * mask_arr[..., None] * (float(g) * scale)
        return (dlogits,)

    return _out(out, (logits,), vjp)


# --- shape plumbing beyond the public catalog ---


def reshape(x: Tensor, shape) -> Tensor:
    shape = tuple(shape)
    try:
        out = x.data.reshape(shape)
    except ValueError:
        raise ShapeError(f"reshape: cannot view {x.shape} as {shape}") from None

    def vjp(g):
        return (g.reshape(x.shape),)

    return _out(out, (x,), vjp)


def stack_axis1(tensors) -> Tensor:
    """Stack equally shaped (batch, dim) tensors into (batch, len, dim)."""
    tensors = list(tensors)
    if not tensors:
        raise ShapeError("stack_axis1: need at least one input")
    base = tensors[0].shape
    for t in tensors[1:]:
        if t.shape != base:
            raise ShapeError(f"stack_axis1: mixed shapes {[t.shape for t in tensors]}")
    out = np.stack([t.data for t in tensors], axis=1)

    def vjp(g):
        return tuple(g[:, s] for s in range(len(tensors)))

    return _out(out, tuple(tensors), vjp)


def lstm_cell(pre: Tensor, c_prev: Tensor) -> tuple[Tensor, Tensor]:
    """Fused LSTM cell: gate preactivations + previous cell -> (h, c).

    Runs on the compiled kernel backend when available.
    """
    if pre.data.ndim != 2 or c_prev.data.ndim != 2 or pre.shape[1] != 4 * c_prev.shape[1]:
        raise ShapeError(f"lstm_cell: pre {pre.shape} vs c_prev {c_prev.shape}")
    h_data, c_data, cache = kernels.lstm_cell_forward(pre.data, c_prev.data)
    needs = pre.requires_grad or c_prev.requires_grad
    h = Tensor(h_data, requires_grad=needs)
    c = Tensor(c_data, requires_grad=needs)

    def vjp(gh, gc):
        dpre, dc_prev = kernels.lstm_cell_backward(gh, gc, c_prev.data, cache)
        return dpre, dc_prev

    record((h, c), (pre, c_prev), vjp)
    return h, c


_CATALOG = {
    "matmul": lambda inputs, attrs: matmul(*inputs),
    "add": lambda inputs, attrs: add(*inputs),
    "mul_elementwise": lambda inputs, attrs: mul(*inputs),
    "concat_last_axis": lambda inputs, attrs: concat_last_axis(inputs),
    "tanh": lambda inputs, attrs: tanh(*inputs),
    "sigmoid": lambda inputs, attrs: sigmoid(*inputs),
    "softmax_last_axis": lambda inputs, attrs: softmax_last_axis(inputs[0], **attrs),
    "embedding_lookup": lambda inputs, attrs: embedding_lookup(inputs[0], **attrs),
    "dropout": lambda inputs, attrs: dropout(inputs[0], **attrs),
    "cross_entropy_with_mask": lambda inputs, attrs: cross_entropy_with_mask(inputs[0], **attrs),
}


def forward_op(kind: str, inputs, **attrs) -> Tensor:
    """Run one catalog op by name. Unknown kinds are a configuration error."""
    try:
        fn = _CATALOG[kind]
    except KeyError:
        raise ConfigError(f"unknown op kind {kind!r}") from None
    return fn(list(inputs), attrs)

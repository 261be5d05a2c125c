"""Dense float64 tensors, trainable parameters, and the gradient tape.

The tape records every differentiable operation executed while it is active
(operations run "in training mode" exactly when a tape is active). Calling
:func:`backward` walks the records in reverse and accumulates gradients into
the ``grad`` buffer of every reachable :class:`Parameter`. Intermediate
gradients live in a scratch dict local to each backward call, so repeated
calls add one full gradient per call, as SGD with gradient accumulation
expects.
"""

from __future__ import annotations

import numpy as np

from ..errors import NumericError, ShapeError


class Tensor:
    """A dense array of 64-bit floats plus autodiff bookkeeping."""

    __slots__ = ("data", "requires_grad")

    def __init__(self, data, requires_grad: bool = False):
        arr = np.asarray(data, dtype=np.float64)
        self.data = np.ascontiguousarray(arr)
        self.requires_grad = requires_grad

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def size(self) -> int:
        return self.data.size

    def item(self) -> float:
        return float(self.data.reshape(()))

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, requires_grad={self.requires_grad})"


def const(data) -> Tensor:
    """Wrap raw values as a non-trainable tensor (masks, literals)."""
    return Tensor(data, requires_grad=False)


class Parameter(Tensor):
    """A named trainable tensor with a persistent gradient accumulator."""

    __slots__ = ("grad", "name")

    def __init__(self, data, name: str):
        super().__init__(data, requires_grad=True)
        self.name = name
        self.grad = np.zeros_like(self.data)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.data.shape})"


class _Record:
    """One executed op: its output tensors, inputs, and vector-Jacobian fn."""

    __slots__ = ("outputs", "inputs", "vjp")

    def __init__(self, outputs, inputs, vjp):
        self.outputs = outputs
        self.inputs = inputs
        self.vjp = vjp


_TAPE_STACK: list["Tape"] = []


class Tape:
    """Ordered record of differentiable ops; a context manager.

    Ops executed while a tape is active are appended in execution order,
    which is a valid topological order of the data flow.
    """

    def __init__(self):
        self.records: list[_Record] = []

    def __enter__(self) -> "Tape":
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        popped = _TAPE_STACK.pop()
        assert popped is self, "tape stack corrupted"

    def __len__(self) -> int:
        return len(self.records)


def active_tape() -> Tape | None:
    return _TAPE_STACK[-1] if _TAPE_STACK else None


def record(outputs, inputs, vjp) -> None:
    """Append an op record to the active tape, if any."""
    tape = active_tape()
    if tape is not None:
        tape.records.append(_Record(outputs, inputs, vjp))


def backward(tape: Tape, loss: Tensor) -> None:
    """Accumulate d(loss)/d(param) into every reachable Parameter's grad.

    loss must be a scalar produced by an op recorded on ``tape``.
    """
    if loss.size != 1:
        raise ShapeError(f"backward needs a scalar loss, got shape {loss.shape}")
    produced = False
    for rec in tape.records:
        if any(out is loss for out in rec.outputs):
            produced = True
            break
    if not produced:
        raise ValueError("loss tensor was not produced on this tape")
    if not np.isfinite(loss.data).all():
        raise NumericError("loss is not finite")

    grads: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    for rec in reversed(tape.records):
        outs = [grads.pop(id(out), None) for out in rec.outputs]
        if all(g is None for g in outs):
            continue
        outs = [
            g if g is not None else np.zeros_like(out.data)
            for g, out in zip(outs, rec.outputs)
        ]
        in_grads = rec.vjp(*outs)
        for tensor, g in zip(rec.inputs, in_grads):
            if g is None or not tensor.requires_grad:
                continue
            if isinstance(tensor, Parameter):
                tensor.grad += g
            else:
                key = id(tensor)
                if key in grads:
                    grads[key] = grads[key] + g
                else:
                    grads[key] = g

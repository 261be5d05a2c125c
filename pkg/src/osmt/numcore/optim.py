"""Plain SGD with optional global-norm gradient clipping."""

from __future__ import annotations

import math

import numpy as np

from ..errors import NumericError
from .tensor import Parameter


def global_grad_norm(params: list[Parameter]) -> float:
    """L2 norm of all gradients viewed as one flat vector."""
    total = 0.0
    for p in params:
        total += float((p.grad * p.grad).sum())
    return math.sqrt(total)


def sgd_step(params: list[Parameter], learning_rate: float, clip_norm: float | None = None) -> None:
    """value -= lr * grad for every parameter, after optional clipping.

    When the global gradient norm exceeds ``clip_norm``, all gradients are
    scaled down to that norm first. Gradients are left untouched otherwise;
    zeroing is the caller's job.
    """
    if learning_rate <= 0:
        raise ValueError(f"learning_rate must be positive, got {learning_rate}")
    for p in params:
        if not np.isfinite(p.grad).all():
            raise NumericError(f"non-finite gradient in parameter {p.name!r}")
    scale = 1.0
    if clip_norm is not None:
        norm = global_grad_norm(params)
        if norm > clip_norm:
            scale = clip_norm / norm
    for p in params:
        p.data -= learning_rate * scale * p.grad


def zero_grads(params: list[Parameter]) -> None:
    for p in params:
        p.zero_grad()

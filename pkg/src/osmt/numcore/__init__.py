"""Minimal dense-tensor core: tape autodiff, op catalog, SGD, grad checking."""

from .check import finite_difference_check
from .ops import (
    add,
    concat_last_axis,
    cross_entropy_with_mask,
    dropout,
    embedding_lookup,
    forward_op,
    lstm_cell,
    matmul,
    mul,
    reshape,
    sigmoid,
    softmax_last_axis,
    stack_axis1,
    tanh,
)
from .optim import global_grad_norm, sgd_step, zero_grads
from .rng import RngStreams
from .tensor import Parameter, Tape, Tensor, active_tape, backward, const

__all__ = [
    "Parameter",
    "RngStreams",
    "Tape",
    "Tensor",
    "active_tape",
    "add",
    "backward",
    "concat_last_axis",
    "const",
    "cross_entropy_with_mask",
    "dropout",
    "embedding_lookup",
    "finite_difference_check",
    "forward_op",
    "global_grad_norm",
    "lstm_cell",
    "matmul",
    "mul",
    "reshape",
    "sgd_step",
    "sigmoid",
    "softmax_last_axis",
    "stack_axis1",
    "tanh",
    "zero_grads",
]

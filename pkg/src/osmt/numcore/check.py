"""Central finite-difference gradient checking.

The one numerical oracle the rest of the test suite leans on: compare the
tape's analytic gradients against symmetric difference quotients, coordinate
by coordinate, and report the worst relative disagreement.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from ..errors import ConfigError, NumericError
from .tensor import Parameter, Tape, Tensor, backward
from .optim import zero_grads


def _eval_scalar(f: Callable[[], Tensor]) -> float:
    out = f()
    val = out.item()
    if not np.isfinite(val):
        raise NumericError("function evaluated to a non-finite value")
    return val


def finite_difference_check(
    f: Callable[[], Tensor],
    params: list[Parameter],
    epsilon: float,
    samples_per_param: int = 20,
    rng: np.random.Generator | None = None,
) -> float:
    """Max relative error between analytic and central-difference gradients.

    ``f`` computes the scalar loss from the current parameter values; it is
    re-evaluated with single coordinates nudged by +/- epsilon. At least
    ``samples_per_param`` coordinates per parameter are probed (all of them
    for small parameters). Existing gradient accumulators are preserved.
    """
    if not 0.0 < epsilon <= 1e-2:
        raise ConfigError(f"epsilon must be in (0, 1e-2], got {epsilon}")
    if rng is None:
        rng = np.random.default_rng(0)

    saved = [p.grad.copy() for p in params]
    zero_grads(params)
    try:
        with Tape() as tape:
            loss = f()
        _ = loss.item()
        if not np.isfinite(loss.data).all():
            raise NumericError("function evaluated to a non-finite value")
        backward(tape, loss)
        analytic = [p.grad.copy() for p in params]
    finally:
        for p, g in zip(params, saved):
            p.grad[...] = g

    worst = 0.0
    for p, grad in zip(params, analytic):
        n = p.size
        if n <= samples_per_param:
            coords = np.arange(n)
        else:
            coords = rng.choice(n, size=samples_per_param, replace=False)
        flat = p.data.reshape(-1)
        gflat = grad.reshape(-1)
        for idx in coords:
            orig = flat[idx]
            flat[idx] = orig + epsilon
            f_plus = _eval_scalar(f)
            flat[idx] = orig - epsilon
            f_minus = _eval_scalar(f)
            flat[idx] = orig
            numeric = (f_plus - f_minus) / (2.0 * epsilon)
            rel = abs(gflat[idx] - numeric) / max(1e-8, abs(numeric))
            worst = max(worst, rel)
    return worst

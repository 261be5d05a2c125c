"""Pure-numpy reference implementation of the fused recurrent-cell kernels.

Gate layout inside the preactivation matrix is ``[input, forget, cell, output]``,
each block ``hidden`` wide. The compiled backend in ``_ckernels.pyx`` computes
the same math; this module is the fallback and the correctness reference.
"""

import numpy as np

BACKEND_NAME = "python"


def _sigmoid(x):
    # piecewise form avoids overflow in exp for large |x|
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def lstm_cell_forward(pre, c_prev):
    """One LSTM cell update.

    pre: (batch, 4*hidden) gate preactivations, c_prev: (batch, hidden).
    Returns (h, c, cache) where cache holds the activated gates plus tanh(c)
    needed by the backward pass.
    """
    hidden = c_prev.shape[-1]
    i = _sigmoid(pre[:, :hidden])
    f = _sigmoid(pre[:, hidden : 2 * hidden])
    g = np.tanh(pre[:, 2 * hidden : 3 * hidden])
    o = _sigmoid(pre[:, 3 * hidden :])
    c = f * c_prev + i * g
    tc = np.tanh(c)
    h = o * tc
    return h, c, (i, f, g, o, tc)


def lstm_cell_backward(dh, dc, c_prev, cache):
    """Backward of :func:`lstm_cell_forward`.

    dh, dc: gradients w.r.t. the cell outputs (dc may be zeros when the cell
    state feeds nothing downstream). Returns (dpre, dc_prev).
    """
    i, f, g, o, tc = cache
    dc_total = dc + dh * o * (1.0 - tc * tc)
    dpre = np.empty((dh.shape[0], 4 * dh.shape[1]), dtype=np.float64)
    hidden = dh.shape[1]
    dpre[:, :hidden] = dc_total * g * i * (1.0 - i)
    dpre[:, hidden : 2 * hidden] = dc_total * c_prev * f * (1.0 - f)
    dpre[:, 2 * hidden : 3 * hidden] = dc_total * i * (1.0 - g * g)
    dpre[:, 3 * hidden :] = dh * tc * o * (1.0 - o)
    dc_prev = dc_total * f
    return dpre, dc_prev

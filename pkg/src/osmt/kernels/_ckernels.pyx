# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fused LSTM-cell kernels.

Same contract as ``_pykernels``: gate layout [input, forget, cell, output].
One pass over the batch*hidden grid instead of a chain of numpy temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, tanh

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline double _sigmoid(double x) nogil:
    if x >= 0.0:
        return 1.0 / (1.0 + exp(-x))
    cdef double e = exp(x)
    return e / (1.0 + e)


def lstm_cell_forward(cnp.ndarray[cnp.float64_t, ndim=2] pre not None,
                      cnp.ndarray[cnp.float64_t, ndim=2] c_prev not None):
    cdef Py_ssize_t batch = c_prev.shape[0]
    cdef Py_ssize_t hidden = c_prev.shape[1]
    if pre.shape[0] != batch or pre.shape[1] != 4 * hidden:
        raise ValueError("lstm_cell: preactivation shape mismatch")

    cdef cnp.ndarray[cnp.float64_t, ndim=2] i_g = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] f_g = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] g_g = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] o_g = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] tc = np.empty((batch, hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] h = np.empty((batch, hidden))

    cdef double[:, ::1] pre_v = np.ascontiguousarray(pre)
    cdef double[:, ::1] cp_v = np.ascontiguousarray(c_prev)
    cdef double[:, ::1] iv = i_g, fv = f_g, gv = g_g, ov = o_g
    cdef double[:, ::1] cv = c, tv = tc, hv = h
    cdef Py_ssize_t b, j
    cdef double ig, fg, gg, og, cc

    with nogil:
        for b in range(batch):
            for j in range(hidden):
                ig = _sigmoid(pre_v[b, j])
                fg = _sigmoid(pre_v[b, hidden + j])
                gg = tanh(pre_v[b, 2 * hidden + j])
                og = _sigmoid(pre_v[b, 3 * hidden + j])
                cc = fg * cp_v[b, j] + ig * gg
                iv[b, j] = ig
                fv[b, j] = fg
                gv[b, j] = gg
                ov[b, j] = og
                cv[b, j] = cc
                tv[b, j] = tanh(cc)
                hv[b, j] = og * tv[b, j]
    return h, c, (i_g, f_g, g_g, o_g, tc)


def lstm_cell_backward(cnp.ndarray[cnp.float64_t, ndim=2] dh not None,
                       cnp.ndarray[cnp.float64_t, ndim=2] dc not None,
                       cnp.ndarray[cnp.float64_t, ndim=2] c_prev not None,
                       cache):
    cdef Py_ssize_t batch = dh.shape[0]
    cdef Py_ssize_t hidden = dh.shape[1]
    i_g, f_g, g_g, o_g, tc = cache

    cdef cnp.ndarray[cnp.float64_t, ndim=2] dpre = np.empty((batch, 4 * hidden))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dc_prev = np.empty((batch, hidden))

    cdef double[:, ::1] dh_v = np.ascontiguousarray(dh)
    cdef double[:, ::1] dc_v = np.ascontiguousarray(dc)
    cdef double[:, ::1] cp_v = np.ascontiguousarray(c_prev)
    cdef double[:, ::1] iv = np.ascontiguousarray(i_g)
    cdef double[:, ::1] fv = np.ascontiguousarray(f_g)
    cdef double[:, ::1] gv = np.ascontiguousarray(g_g)
    cdef double[:, ::1] ov = np.ascontiguousarray(o_g)
    cdef double[:, ::1] tv = np.ascontiguousarray(tc)
    cdef double[:, ::1] dpre_v = dpre
    cdef double[:, ::1] dcp_v = dc_prev
    cdef Py_ssize_t b, j
    cdef double dct, ig, fg, gg, og

    with nogil:
        for b in range(batch):
            for j in range(hidden):
                ig = iv[b, j]
                fg = fv[b, j]
                gg = gv[b, j]
                og = ov[b, j]
                dct = dc_v[b, j] + dh_v[b, j] * og * (1.0 - tv[b, j] * tv[b, j])
                dpre_v[b, j] = dct * gg * ig * (1.0 - ig)
                dpre_v[b, hidden + j] = dct * cp_v[b, j] * fg * (1.0 - fg)
                dpre_v[b, 2 * hidden + j] = dct * ig * (1.0 - gg * gg)
                dpre_v[b, 3 * hidden + j] = dh_v[b, j] * tv[b, j] * og * (1.0 - og)
                dcp_v[b, j] = dct * fg
    return dpre, dc_prev

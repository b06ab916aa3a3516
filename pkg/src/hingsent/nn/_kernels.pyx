# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in `kernels_py.py`: identical signatures
and conventions, with the per-timestep work fused into C loops and the
matrix products routed through BLAS. Single-threaded on purpose so results
are reproducible for a fixed seed.
"""

from libc.math cimport exp, tanh
from scipy.linalg.cython_blas cimport dgemm

import numpy as np


cdef inline double _sig(double v) nogil:
    return 1.0 / (1.0 + exp(-v))


cdef void _gemm_cc(double[:, ::1] a, double[:, ::1] bmat, double[:, ::1] out,
                   double beta) nogil:
    # out = a @ bmat (+ beta * out), all C-contiguous: run Fortran dgemm on
    # the swapped operands.
    cdef int m = a.shape[0], k = a.shape[1], n = bmat.shape[1]
    cdef double alpha = 1.0
    if m == 0 or n == 0 or k == 0:
        return
    dgemm("N", "N", &n, &m, &k, &alpha, &bmat[0, 0], &n, &a[0, 0], &k,
          &beta, &out[0, 0], &n)


cdef void _gemm_tn(double[:, ::1] a, double[:, ::1] bmat, double[:, ::1] out,
                   double beta) nogil:
    # out = a.T @ bmat (+ beta * out)
    cdef int m = a.shape[1], k = a.shape[0], n = bmat.shape[1]
    cdef double alpha = 1.0
    if m == 0 or n == 0 or k == 0:
        return
    dgemm("N", "T", &n, &m, &k, &alpha, &bmat[0, 0], &n, &a[0, 0], &m,
          &beta, &out[0, 0], &n)


cdef void _gemm_nt(double[:, ::1] a, double[:, ::1] bmat, double[:, ::1] out,
                   double beta) nogil:
    # out = a @ bmat.T (+ beta * out)
    cdef int m = a.shape[0], k = a.shape[1], n = bmat.shape[0]
    cdef double alpha = 1.0
    if m == 0 or n == 0 or k == 0:
        return
    dgemm("T", "N", &n, &m, &k, &alpha, &bmat[0, 0], &k, &a[0, 0], &k,
          &beta, &out[0, 0], &n)


cdef void _gemm_cc_strided(double * a, int lda, double[:, ::1] bmat,
                           double * out, int ldc, int m, int k, int n,
                           double beta) nogil:
    # out (m x n, row stride ldc) = a (m x k, row stride lda) @ bmat (+ beta*out)
    cdef double alpha = 1.0
    if m == 0 or n == 0 or k == 0:
        return
    dgemm("N", "N", &n, &m, &k, &alpha, &bmat[0, 0], &n, a, &lda,
          &beta, out, &ldc)


def lstm_forward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                 double[::1] b):
    cdef Py_ssize_t n = x.shape[0], t_len = x.shape[1], d = x.shape[2]
    cdef Py_ssize_t hs = wh.shape[0]
    cdef Py_ssize_t i, j, t
    cdef int row_stride = <int> (t_len * 4 * hs)

    gates_arr = np.empty((n, t_len, 4 * hs))
    h_arr = np.zeros((n, t_len, hs))
    c_arr = np.zeros((n, t_len, hs))
    cdef double[:, :, ::1] gates = gates_arr
    cdef double[:, :, ::1] h = h_arr
    cdef double[:, :, ::1] c = c_arr

    # input contribution and bias for all steps in one pass
    flat_x = np.asarray(x).reshape(n * t_len, d)
    flat_g = gates_arr.reshape(n * t_len, 4 * hs)
    cdef double[:, ::1] fx = flat_x
    cdef double[:, ::1] fg = flat_g
    _gemm_cc(fx, wx, fg, 0.0)
    gates_arr += b

    hprev_arr = np.zeros((n, hs))
    cdef double[:, ::1] h_prev = hprev_arr
    cdef double gi, gf, gg, go, cc

    with nogil:
        for t in range(t_len):
            # accumulate the recurrent term straight into the strided slab
            _gemm_cc_strided(&h_prev[0, 0], <int> hs, wh, &gates[0, t, 0],
                             row_stride, <int> n, <int> hs, <int> (4 * hs), 1.0)
            for i in range(n):
                for j in range(hs):
                    gi = _sig(gates[i, t, j])
                    gf = _sig(gates[i, t, hs + j])
                    gg = tanh(gates[i, t, 2 * hs + j])
                    go = _sig(gates[i, t, 3 * hs + j])
                    if t > 0:
                        cc = gf * c[i, t - 1, j] + gi * gg
                    else:
                        cc = gi * gg
                    c[i, t, j] = cc
                    h[i, t, j] = go * tanh(cc)
                    h_prev[i, j] = h[i, t, j]
                    gates[i, t, j] = gi
                    gates[i, t, hs + j] = gf
                    gates[i, t, 2 * hs + j] = gg
                    gates[i, t, 3 * hs + j] = go
    return h_arr, c_arr, gates_arr


def lstm_backward(double[:, :, ::1] x, double[:, ::1] wx, double[:, ::1] wh,
                  double[:, :, ::1] h, double[:, :, ::1] c,
                  double[:, :, ::1] gates, double[:, :, ::1] dh_out):
    cdef Py_ssize_t n = x.shape[0], t_len = x.shape[1], d = x.shape[2]
    cdef Py_ssize_t hs = h.shape[2]
    cdef Py_ssize_t i, j, t

    dz_arr = np.empty((n, t_len, 4 * hs))
    dh_next_arr = np.zeros((n, hs))
    dc_next_arr = np.zeros((n, hs))
    cdef double[:, :, ::1] dz_all = dz_arr
    cdef double[:, ::1] dh_next = dh_next_arr
    cdef double[:, ::1] dc_next = dc_next_arr
    cdef int row_stride = <int> (t_len * 4 * hs)
    cdef int four_h = <int> (4 * hs)
    cdef int hs_i = <int> hs
    cdef int n_i = <int> n
    cdef double alpha = 1.0, zero = 0.0
    cdef double gi, gf, gg, go, tc, dh, dc, cp

    with nogil:
        for t in range(t_len - 1, -1, -1):
            for i in range(n):
                for j in range(hs):
                    gi = gates[i, t, j]
                    gf = gates[i, t, hs + j]
                    gg = gates[i, t, 2 * hs + j]
                    go = gates[i, t, 3 * hs + j]
                    cp = c[i, t - 1, j] if t > 0 else 0.0
                    tc = tanh(c[i, t, j])
                    dh = dh_out[i, t, j] + dh_next[i, j]
                    dc = dc_next[i, j] + dh * go * (1.0 - tc * tc)
                    dz_all[i, t, j] = dc * gg * gi * (1.0 - gi)
                    dz_all[i, t, hs + j] = dc * cp * gf * (1.0 - gf)
                    dz_all[i, t, 2 * hs + j] = dc * gi * (1.0 - gg * gg)
                    dz_all[i, t, 3 * hs + j] = dh * tc * go * (1.0 - go)
                    dc_next[i, j] = dc * gf
            # dh_next = dz_t @ wh.T with dz_t read straight from the slab
            dgemm("T", "N", &hs_i, &n_i, &four_h, &alpha,
                  &wh[0, 0], &four_h, &dz_all[0, t, 0], &row_stride,
                  &zero, &dh_next[0, 0], &hs_i)

    flat_dz = dz_arr.reshape(n * t_len, 4 * hs)
    flat_x = np.asarray(x).reshape(n * t_len, d)
    dx_arr = np.empty((n, t_len, d))
    flat_dx = dx_arr.reshape(n * t_len, d)
    dwx_arr = np.empty((d, 4 * hs))
    dwh_arr = np.empty((hs, 4 * hs))
    cdef double[:, ::1] fdz = flat_dz
    cdef double[:, ::1] fx = flat_x
    cdef double[:, ::1] fdx = flat_dx
    cdef double[:, ::1] dwx = dwx_arr
    cdef double[:, ::1] dwh = dwh_arr
    _gemm_nt(fdz, wx, fdx, 0.0)
    _gemm_tn(fx, fdz, dwx, 0.0)

    h_prev_all = np.zeros((n, t_len, hs))
    h_prev_all[:, 1:, :] = np.asarray(h)[:, :-1, :]
    flat_hp = h_prev_all.reshape(n * t_len, hs)
    cdef double[:, ::1] fhp = flat_hp
    _gemm_tn(fhp, fdz, dwh, 0.0)

    db = dz_arr.sum(axis=(0, 1))
    return dx_arr, dwx_arr, dwh_arr, db


def conv1d_forward(double[:, :, ::1] x, double[:, :, ::1] k, double[::1] b):
    # per (sample, tap) BLAS product over the contiguous window block
    cdef Py_ssize_t n = x.shape[0], t_len = x.shape[1], cin = x.shape[2]
    cdef Py_ssize_t nf = k.shape[0], width = k.shape[1]
    cdef Py_ssize_t t_out = t_len - width + 1
    cdef Py_ssize_t i, t, f, j, cch

    z_arr = np.empty((n, t_out, nf))
    ktap_arr = np.empty((nf, cin))
    cdef double[:, :, ::1] z = z_arr
    cdef double[:, ::1] ktap = ktap_arr
    cdef double[:, ::1] xblock, zslab

    with nogil:
        for i in range(n):
            for t in range(t_out):
                for f in range(nf):
                    z[i, t, f] = b[f]
        for j in range(width):
            for f in range(nf):
                for cch in range(cin):
                    ktap[f, cch] = k[f, j, cch]
            for i in range(n):
                xblock = x[i, j : j + t_out, :]
                zslab = z[i]
                _gemm_nt(xblock, ktap, zslab, 1.0)
    return z_arr


def conv1d_backward(double[:, :, ::1] x, double[:, :, ::1] k,
                    double[:, :, ::1] dz):
    cdef Py_ssize_t n = x.shape[0], t_len = x.shape[1], cin = x.shape[2]
    cdef Py_ssize_t nf = k.shape[0], width = k.shape[1]
    cdef Py_ssize_t t_out = dz.shape[1]
    cdef Py_ssize_t i, t, f, j, cch

    dx_arr = np.zeros((n, t_len, cin))
    dk_arr = np.empty((nf, width, cin))
    db_arr = np.zeros(nf)
    ktap_arr = np.empty((nf, cin))
    dktap_arr = np.empty((nf, cin))
    cdef double[:, :, ::1] dx = dx_arr
    cdef double[:, :, ::1] dk = dk_arr
    cdef double[::1] db = db_arr
    cdef double[:, ::1] ktap = ktap_arr
    cdef double[:, ::1] dktap = dktap_arr
    cdef double[:, ::1] xblock, dxblock, dzslab

    with nogil:
        for i in range(n):
            for t in range(t_out):
                for f in range(nf):
                    db[f] += dz[i, t, f]
        for j in range(width):
            for f in range(nf):
                for cch in range(cin):
                    ktap[f, cch] = k[f, j, cch]
                    dktap[f, cch] = 0.0
            for i in range(n):
                xblock = x[i, j : j + t_out, :]
                dxblock = dx[i, j : j + t_out, :]
                dzslab = dz[i]
                _gemm_cc(dzslab, ktap, dxblock, 1.0)   # dx block += dz @ k_tap
                _gemm_tn(dzslab, xblock, dktap, 1.0)   # dk_tap += dz.T @ x block
            for f in range(nf):
                for cch in range(cin):
                    dk[f, j, cch] = dktap[f, cch]
    return dx_arr, dk_arr, db_arr

"""NumPy implementations of the hot kernels (LSTM recurrence, valid 1-d
convolution). The compiled extension in `_kernels.pyx` exposes the same
four functions; whichever is active is chosen in `backend.py`.

Conventions shared by both backends: float64 C-contiguous arrays, batch
first. LSTM gate blocks are ordered i, f, g, o along the last axis of the
weight matrices wx (D, 4H), wh (H, 4H) and bias b (4H,). `gates` returned
by the forward pass holds post-activation gate values, which is exactly
what the backward pass needs.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit as _sigmoid


def lstm_forward(x, wx, wh, b):
    """Run the recurrence over (N, T, D) inputs.

    Returns (h, c, gates): hidden states (N, T, H), cell states (N, T, H),
    and activated gate values (N, T, 4H).
    """
    n, t_len, _ = x.shape
    hsize = wh.shape[0]
    gates = x.reshape(n * t_len, -1) @ wx
    gates = gates.reshape(n, t_len, 4 * hsize)
    gates += b
    h = np.zeros((n, t_len, hsize))
    c = np.zeros((n, t_len, hsize))
    h_prev = np.zeros((n, hsize))
    c_prev = np.zeros((n, hsize))
    for t in range(t_len):
        z = gates[:, t, :] + h_prev @ wh
        gi = _sigmoid(z[:, :hsize])
        gf = _sigmoid(z[:, hsize : 2 * hsize])
        gg = np.tanh(z[:, 2 * hsize : 3 * hsize])
        go = _sigmoid(z[:, 3 * hsize :])
        c_prev = gf * c_prev + gi * gg
        h_prev = go * np.tanh(c_prev)
        gates[:, t, :hsize] = gi
        gates[:, t, hsize : 2 * hsize] = gf
        gates[:, t, 2 * hsize : 3 * hsize] = gg
        gates[:, t, 3 * hsize :] = go
        h[:, t, :] = h_prev
        c[:, t, :] = c_prev
    return h, c, gates


def lstm_backward(x, wx, wh, h, c, gates, dh_out):
    """Backpropagation through time.

    dh_out is the loss gradient w.r.t. every hidden state (N, T, H); for a
    final-state-only consumer all but the last step are zero. Returns
    (dx, dwx, dwh, db).
    """
    n, t_len, hsize = h.shape
    dz_all = np.empty((n, t_len, 4 * hsize))
    dh_next = np.zeros((n, hsize))
    dc_next = np.zeros((n, hsize))
    for t in range(t_len - 1, -1, -1):
        gi = gates[:, t, :hsize]
        gf = gates[:, t, hsize : 2 * hsize]
        gg = gates[:, t, 2 * hsize : 3 * hsize]
        go = gates[:, t, 3 * hsize :]
        c_prev = c[:, t - 1, :] if t > 0 else np.zeros((n, hsize))
        tc = np.tanh(c[:, t, :])
        dh = dh_out[:, t, :] + dh_next
        dc = dc_next + dh * go * (1.0 - tc * tc)
        dz = dz_all[:, t, :]
        dz[:, :hsize] = dc * gg * gi * (1.0 - gi)
        dz[:, hsize : 2 * hsize] = dc * c_prev * gf * (1.0 - gf)
        dz[:, 2 * hsize : 3 * hsize] = dc * gi * (1.0 - gg * gg)
        dz[:, 3 * hsize :] = dh * tc * go * (1.0 - go)
        dh_next = dz @ wh.T
        dc_next = dc * gf
    flat_dz = dz_all.reshape(n * t_len, 4 * hsize)
    dx = (flat_dz @ wx.T).reshape(x.shape)
    dwx = x.reshape(n * t_len, -1).T @ flat_dz
    h_prev_all = np.zeros_like(h)
    h_prev_all[:, 1:, :] = h[:, :-1, :]
    dwh = h_prev_all.reshape(n * t_len, hsize).T @ flat_dz
    db = dz_all.sum(axis=(0, 1))
    return dx, dwx, dwh, db


def conv1d_forward(x, k, b):
    """Valid 1-d convolution, stride 1, no activation.

    x (N, T, C), k (F, W, C), b (F,) -> (N, T - W + 1, F).
    """
    n, t_len, _ = x.shape
    nfilt, width, _ = k.shape
    t_out = t_len - width + 1
    z = np.zeros((n, t_out, nfilt))
    z += b
    for j in range(width):
        z += x[:, j : j + t_out, :] @ k[:, j, :].T
    return z


def conv1d_backward(x, k, dz):
    """Gradients of the valid convolution: (dx, dk, db)."""
    _, t_out, _ = dz.shape
    width = k.shape[1]
    db = dz.sum(axis=(0, 1))
    dk = np.empty_like(k)
    dx = np.zeros_like(x)
    for j in range(width):
        dk[:, j, :] = np.tensordot(dz, x[:, j : j + t_out, :], axes=([0, 1], [0, 1]))
        dx[:, j : j + t_out, :] += dz @ k[:, j, :]
    return dx, dk, db

"""Layer forward passes with hand-derived gradients.

Everything is batch-first float64. Each forward returns (output, cache)
and the paired backward consumes that cache plus the upstream gradient;
caches are only valid for the forward call that produced them. The LSTM
recurrence and the convolution inner sums are delegated to the selected
kernel backend; the rest is plain NumPy.
"""

from __future__ import annotations

import numpy as np

from . import backend


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


# ---------------------------------------------------------------- embedding

def embedding_forward(emb: np.ndarray, ids: np.ndarray) -> np.ndarray:
    """Row lookup: (V, D) table, (N, T) int ids -> (N, T, D)."""
    _require(ids.min(initial=0) >= 0 and ids.max(initial=0) < emb.shape[0],
             f"id out of range for embedding table of {emb.shape[0]} rows")
    return emb[ids]


def embedding_backward(ids: np.ndarray, grad_out: np.ndarray, vocab_size: int) -> np.ndarray:
    """Scatter-add: duplicate ids accumulate additively."""
    grad = np.zeros((vocab_size, grad_out.shape[-1]))
    np.add.at(grad, ids.reshape(-1), grad_out.reshape(-1, grad_out.shape[-1]))
    return grad


# -------------------------------------------------------------------- dense

def dense_forward(w: np.ndarray, b: np.ndarray, x: np.ndarray, activation: str = "linear"):
    """y = act(x @ w.T + b) with w of shape (out, in); activation linear or relu."""
    _require(w.shape[0] == b.shape[0], f"bias shape {b.shape} does not match {w.shape}")
    _require(x.shape[-1] == w.shape[1],
             f"input width {x.shape[-1]} does not match weight {w.shape}")
    z = x @ w.T + b
    if activation == "relu":
        y = np.maximum(z, 0.0)
    elif activation == "linear":
        y = z
    else:
        raise ValueError(f"unknown activation {activation!r}")
    return y, (x, w, y, activation)


def dense_backward(cache, grad_out: np.ndarray):
    x, w, y, activation = cache
    if activation == "relu":
        grad_out = grad_out * (y > 0.0)
    dw = grad_out.T @ x
    db = grad_out.sum(axis=0)
    dx = grad_out @ w
    return dw, db, dx


# --------------------------------------------------------------------- conv

def conv1d_forward(k: np.ndarray, b: np.ndarray, x: np.ndarray):
    """Valid convolution + ReLU: x (N, T, C), k (F, W, C) -> (N, T-W+1, F)."""
    _require(x.shape[1] >= k.shape[1],
             f"sequence length {x.shape[1]} shorter than kernel width {k.shape[1]}")
    _require(x.shape[2] == k.shape[2],
             f"channels {x.shape[2]} do not match kernel {k.shape}")
    x = np.ascontiguousarray(x, dtype=np.float64)
    z = backend.conv1d_forward(x, k, b)
    y = np.maximum(z, 0.0)
    return y, (x, k, y)


def conv1d_backward(cache, grad_out: np.ndarray):
    x, k, y = cache
    dz = grad_out * (y > 0.0)
    dz = np.ascontiguousarray(dz)
    dx, dk, db = backend.conv1d_backward(x, k, dz)
    return dk, db, dx


# ------------------------------------------------------------------ pooling

def global_max_pool(x: np.ndarray):
    """Per-channel max over time; gradient goes to the first argmax."""
    idx = x.argmax(axis=1)
    y = np.take_along_axis(x, idx[:, None, :], axis=1)[:, 0, :]
    return y, (idx, x.shape)


def global_max_pool_backward(cache, grad_out: np.ndarray) -> np.ndarray:
    idx, shape = cache
    dx = np.zeros(shape)
    np.put_along_axis(dx, idx[:, None, :], grad_out[:, None, :], axis=1)
    return dx


def global_avg_pool(x: np.ndarray):
    return x.mean(axis=1), x.shape


def global_avg_pool_backward(cache, grad_out: np.ndarray) -> np.ndarray:
    shape = cache
    return np.broadcast_to(grad_out[:, None, :] / shape[1], shape).copy()


# ------------------------------------------------------------------- concat

def concat(xs: list[np.ndarray], axis: int = -1):
    _require(len(xs) >= 1, "concat needs at least one input")

    def off_axis(shape):
        s = list(shape)
        del s[axis]
        return tuple(s)

    base = off_axis(xs[0].shape)
    for x in xs[1:]:
        _require(off_axis(x.shape) == base,
                 f"off-axis shape mismatch in concat: {x.shape} vs {xs[0].shape}")
    widths = [x.shape[axis] for x in xs]
    return np.concatenate(xs, axis=axis), (widths, axis)


def concat_backward(cache, grad_out: np.ndarray) -> list[np.ndarray]:
    widths, axis = cache
    return np.split(grad_out, np.cumsum(widths)[:-1], axis=axis)


# --------------------------------------------------------------------- lstm

def lstm_forward(wx: np.ndarray, wh: np.ndarray, b: np.ndarray, x: np.ndarray,
                 return_sequences: bool = False):
    """Single LSTM layer, zero initial state. Returns (N, T, H) when
    return_sequences else (N, H)."""
    _require(x.shape[2] == wx.shape[0],
             f"input width {x.shape[2]} does not match wx {wx.shape}")
    _require(wx.shape[1] == 4 * wh.shape[0] and wh.shape[1] == 4 * wh.shape[0]
             and b.shape[0] == 4 * wh.shape[0],
             f"inconsistent LSTM parameter shapes {wx.shape}/{wh.shape}/{b.shape}")
    x = np.ascontiguousarray(x, dtype=np.float64)
    h, c, gates = backend.lstm_forward(x, wx, wh, b)
    out = h if return_sequences else h[:, -1, :]
    return out, (x, wx, wh, h, c, gates, return_sequences)


def lstm_backward(cache, grad_out: np.ndarray):
    x, wx, wh, h, c, gates, return_sequences = cache
    if return_sequences:
        dh_out = np.ascontiguousarray(grad_out)
    else:
        dh_out = np.zeros_like(h)
        dh_out[:, -1, :] = grad_out
    dx, dwx, dwh, db = backend.lstm_backward(x, wx, wh, h, c, gates, dh_out)
    return dwx, dwh, db, dx


def bilstm_forward(params_fwd: tuple, params_bwd: tuple, x: np.ndarray):
    """Forward and reversed-time LSTM, per-step outputs concatenated
    [h_fwd; h_bwd] -> (N, T, 2H). Always returns sequences."""
    out_f, cache_f = lstm_forward(*params_fwd, x, return_sequences=True)
    x_rev = np.ascontiguousarray(x[:, ::-1, :])
    out_b, cache_b = lstm_forward(*params_bwd, x_rev, return_sequences=True)
    out = np.concatenate([out_f, out_b[:, ::-1, :]], axis=2)
    return out, (cache_f, cache_b, out_f.shape[2])


def bilstm_backward(cache, grad_out: np.ndarray):
    cache_f, cache_b, hsize = cache
    grads_f = lstm_backward(cache_f, grad_out[:, :, :hsize])
    grads_b = lstm_backward(cache_b, np.ascontiguousarray(grad_out[:, ::-1, hsize:]))
    dx = grads_f[3] + grads_b[3][:, ::-1, :]
    return grads_f[:3], grads_b[:3], dx


# ------------------------------------------------------- softmax + loss

_PROB_EPS = 1e-15


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row softmax with max subtraction, clipped a hair inside (0, 1) so
    saturated rows (exp underflow) never yield exact 0/1 probabilities or
    infinite log loss. The clip moves row sums by at most a few 1e-15."""
    if not np.all(np.isfinite(logits)):
        raise ValueError("non-finite logits")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    probs = e / e.sum(axis=-1, keepdims=True)
    return np.clip(probs, _PROB_EPS, 1.0 - _PROB_EPS, out=probs)


def softmax_xent(logits: np.ndarray, gold: np.ndarray):
    """Fused stable softmax and cross-entropy over (N, C) logits and (N,)
    integer labels. Returns (per-example losses, probs, dlogits) where
    dlogits is the gradient of the summed loss."""
    probs = softmax(logits)
    n = logits.shape[0]
    losses = -np.log(probs[np.arange(n), gold])
    dlogits = probs.copy()
    dlogits[np.arange(n), gold] -= 1.0
    return losses, probs, dlogits


# ----------------------------------------------------------- initialization

def glorot_uniform(rng: np.random.Generator, shape: tuple[int, ...],
                   fan_in: int, fan_out: int) -> np.ndarray:
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def init_lstm(rng: np.random.Generator, in_dim: int, hidden: int):
    """Glorot-uniform weights; zero biases except forget gate = 1."""
    wx = glorot_uniform(rng, (in_dim, 4 * hidden), in_dim, hidden)
    wh = glorot_uniform(rng, (hidden, 4 * hidden), hidden, hidden)
    b = np.zeros(4 * hidden)
    b[hidden : 2 * hidden] = 1.0
    return wx, wh, b

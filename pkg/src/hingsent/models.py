"""The four classifier architectures and their uniform build/forward
entry points.

All four read a (batch, seq_len) matrix of token ids and emit 3-class
probabilities:

  lstm       embedding -> LSTM (final state) -> dense+relu -> dense(3)
  lstm-conv  embedding -> conv1d(k=3)+relu -> LSTM (sequences)
             -> global max pool -> dense(3)
  bilstm     embedding -> BiLSTM (sequences) -> conv1d(k=3)+relu
             -> [global avg pool || global max pool] -> dense(3)
  cnn        embedding -> conv1d(k=3|4|5)+relu in parallel -> per-branch
             global max pool -> concat -> dense+relu -> dense(3)

Parameters are drawn from a PCG64 generator seeded by the caller, in the
fixed order each `_build_*` function lists them, so identical
(arch, config, seed) always yields identical parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .nn import layers
from .nn.layers import glorot_uniform, init_lstm

CONV_KERNEL_SIZE = 3
CNN_KERNEL_SIZES = (3, 4, 5)
NUM_CLASSES = 3
EMBEDDING_INIT_SCALE = 0.05


class ArchId(Enum):
    LSTM = "lstm"
    LSTM_CONV = "lstm-conv"
    BILSTM = "bilstm"
    CNN = "cnn"

    @classmethod
    def from_string(cls, s: str) -> "ArchId":
        for a in cls:
            if a.value == s:
                return a
        raise ValueError(
            f"unknown architecture {s!r}; expected one of "
            + ", ".join(a.value for a in cls)
        )


@dataclass(frozen=True)
class ModelConfig:
    vocab_size: int = 20000
    seq_len: int = 50
    embedding_dim: int = 128
    lstm_units: int = 64
    conv_filters: int = 64
    dense_hidden: int = 32
    num_classes: int = NUM_CLASSES

    def __post_init__(self):
        for name in ("vocab_size", "seq_len", "embedding_dim", "lstm_units",
                     "conv_filters", "dense_hidden"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.num_classes != NUM_CLASSES:
            raise ValueError(f"num_classes is fixed at {NUM_CLASSES}")
        if self.seq_len < max(CNN_KERNEL_SIZES):
            raise ValueError(
                f"seq_len must be >= {max(CNN_KERNEL_SIZES)} for valid convolutions"
            )


@dataclass
class Model:
    arch: ArchId
    config: ModelConfig
    params: dict[str, np.ndarray]


def _init_embedding(rng, config):
    return rng.uniform(-EMBEDDING_INIT_SCALE, EMBEDDING_INIT_SCALE,
                       size=(config.vocab_size, config.embedding_dim))


def _init_dense(rng, out_dim, in_dim):
    w = glorot_uniform(rng, (out_dim, in_dim), in_dim, out_dim)
    return w, np.zeros(out_dim)


def _init_conv(rng, filters, width, channels):
    k = glorot_uniform(rng, (filters, width, channels),
                       width * channels, width * filters)
    return k, np.zeros(filters)


# ------------------------------------------------------------------- lstm

def _build_lstm(config: ModelConfig, rng) -> dict[str, np.ndarray]:
    p = {}
    p["emb"] = _init_embedding(rng, config)
    p["lstm_wx"], p["lstm_wh"], p["lstm_b"] = init_lstm(
        rng, config.embedding_dim, config.lstm_units)
    p["fc1_w"], p["fc1_b"] = _init_dense(rng, config.dense_hidden, config.lstm_units)
    p["out_w"], p["out_b"] = _init_dense(rng, config.num_classes, config.dense_hidden)
    return p


def _logits_lstm(params, config, ids):
    x = layers.embedding_forward(params["emb"], ids)
    h, c_lstm = layers.lstm_forward(params["lstm_wx"], params["lstm_wh"],
                                    params["lstm_b"], x, return_sequences=False)
    a, c_fc1 = layers.dense_forward(params["fc1_w"], params["fc1_b"], h, "relu")
    logits, c_out = layers.dense_forward(params["out_w"], params["out_b"], a, "linear")
    return logits, (ids, c_lstm, c_fc1, c_out)


def _backward_lstm(params, config, cache, dlogits):
    ids, c_lstm, c_fc1, c_out = cache
    dw_out, db_out, da = layers.dense_backward(c_out, dlogits)
    dw_fc1, db_fc1, dh = layers.dense_backward(c_fc1, da)
    dwx, dwh, dbl, dx = layers.lstm_backward(c_lstm, dh)
    demb = layers.embedding_backward(ids, dx, config.vocab_size)
    return {"emb": demb, "lstm_wx": dwx, "lstm_wh": dwh, "lstm_b": dbl,
            "fc1_w": dw_fc1, "fc1_b": db_fc1, "out_w": dw_out, "out_b": db_out}


# -------------------------------------------------------------- lstm-conv

def _build_lstm_conv(config: ModelConfig, rng) -> dict[str, np.ndarray]:
    p = {}
    p["emb"] = _init_embedding(rng, config)
    p["conv_k"], p["conv_b"] = _init_conv(
        rng, config.conv_filters, CONV_KERNEL_SIZE, config.embedding_dim)
    p["lstm_wx"], p["lstm_wh"], p["lstm_b"] = init_lstm(
        rng, config.conv_filters, config.lstm_units)
    p["out_w"], p["out_b"] = _init_dense(rng, config.num_classes, config.lstm_units)
    return p


def _logits_lstm_conv(params, config, ids):
    x = layers.embedding_forward(params["emb"], ids)
    y, c_conv = layers.conv1d_forward(params["conv_k"], params["conv_b"], x)
    h, c_lstm = layers.lstm_forward(params["lstm_wx"], params["lstm_wh"],
                                    params["lstm_b"], y, return_sequences=True)
    pooled, c_pool = layers.global_max_pool(h)
    logits, c_out = layers.dense_forward(params["out_w"], params["out_b"],
                                         pooled, "linear")
    return logits, (ids, c_conv, c_lstm, c_pool, c_out)


def _backward_lstm_conv(params, config, cache, dlogits):
    ids, c_conv, c_lstm, c_pool, c_out = cache
    dw_out, db_out, dpool = layers.dense_backward(c_out, dlogits)
    dh = layers.global_max_pool_backward(c_pool, dpool)
    dwx, dwh, dbl, dy = layers.lstm_backward(c_lstm, dh)
    dk, dcb, dx = layers.conv1d_backward(c_conv, dy)
    demb = layers.embedding_backward(ids, dx, config.vocab_size)
    return {"emb": demb, "conv_k": dk, "conv_b": dcb, "lstm_wx": dwx,
            "lstm_wh": dwh, "lstm_b": dbl, "out_w": dw_out, "out_b": db_out}


# ----------------------------------------------------------------- bilstm

def _build_bilstm(config: ModelConfig, rng) -> dict[str, np.ndarray]:
    p = {}
    p["emb"] = _init_embedding(rng, config)
    p["lf_wx"], p["lf_wh"], p["lf_b"] = init_lstm(
        rng, config.embedding_dim, config.lstm_units)
    p["lb_wx"], p["lb_wh"], p["lb_b"] = init_lstm(
        rng, config.embedding_dim, config.lstm_units)
    p["conv_k"], p["conv_b"] = _init_conv(
        rng, config.conv_filters, CONV_KERNEL_SIZE, 2 * config.lstm_units)
    p["out_w"], p["out_b"] = _init_dense(
        rng, config.num_classes, 2 * config.conv_filters)
    return p


def _logits_bilstm(params, config, ids):
    x = layers.embedding_forward(params["emb"], ids)
    seq, c_bi = layers.bilstm_forward(
        (params["lf_wx"], params["lf_wh"], params["lf_b"]),
        (params["lb_wx"], params["lb_wh"], params["lb_b"]), x)
    y, c_conv = layers.conv1d_forward(params["conv_k"], params["conv_b"], seq)
    avg, c_avg = layers.global_avg_pool(y)
    mx, c_max = layers.global_max_pool(y)
    cat, c_cat = layers.concat([avg, mx], axis=1)
    logits, c_out = layers.dense_forward(params["out_w"], params["out_b"],
                                         cat, "linear")
    return logits, (ids, c_bi, c_conv, c_avg, c_max, c_cat, c_out)


def _backward_bilstm(params, config, cache, dlogits):
    ids, c_bi, c_conv, c_avg, c_max, c_cat, c_out = cache
    dw_out, db_out, dcat = layers.dense_backward(c_out, dlogits)
    davg, dmax = layers.concat_backward(c_cat, dcat)
    dy = (layers.global_avg_pool_backward(c_avg, davg)
          + layers.global_max_pool_backward(c_max, dmax))
    dk, dcb, dseq = layers.conv1d_backward(c_conv, dy)
    (df_wx, df_wh, df_b), (db_wx, db_wh, db_b), dx = layers.bilstm_backward(c_bi, dseq)
    demb = layers.embedding_backward(ids, dx, config.vocab_size)
    return {"emb": demb, "lf_wx": df_wx, "lf_wh": df_wh, "lf_b": df_b,
            "lb_wx": db_wx, "lb_wh": db_wh, "lb_b": db_b,
            "conv_k": dk, "conv_b": dcb, "out_w": dw_out, "out_b": db_out}


# -------------------------------------------------------------------- cnn

def _build_cnn(config: ModelConfig, rng) -> dict[str, np.ndarray]:
    p = {}
    p["emb"] = _init_embedding(rng, config)
    for w in CNN_KERNEL_SIZES:
        p[f"conv{w}_k"], p[f"conv{w}_b"] = _init_conv(
            rng, config.conv_filters, w, config.embedding_dim)
    p["fc1_w"], p["fc1_b"] = _init_dense(
        rng, config.dense_hidden, len(CNN_KERNEL_SIZES) * config.conv_filters)
    p["out_w"], p["out_b"] = _init_dense(rng, config.num_classes, config.dense_hidden)
    return p


def _logits_cnn(params, config, ids):
    x = layers.embedding_forward(params["emb"], ids)
    pooled = []
    caches = []
    for w in CNN_KERNEL_SIZES:
        y, c_conv = layers.conv1d_forward(params[f"conv{w}_k"], params[f"conv{w}_b"], x)
        pw, c_pool = layers.global_max_pool(y)
        pooled.append(pw)
        caches.append((c_conv, c_pool))
    cat, c_cat = layers.concat(pooled, axis=1)
    a, c_fc1 = layers.dense_forward(params["fc1_w"], params["fc1_b"], cat, "relu")
    logits, c_out = layers.dense_forward(params["out_w"], params["out_b"], a, "linear")
    return logits, (ids, caches, c_cat, c_fc1, c_out)


def _backward_cnn(params, config, cache, dlogits):
    ids, caches, c_cat, c_fc1, c_out = cache
    dw_out, db_out, da = layers.dense_backward(c_out, dlogits)
    dw_fc1, db_fc1, dcat = layers.dense_backward(c_fc1, da)
    dsplits = layers.concat_backward(c_cat, dcat)
    grads = {"fc1_w": dw_fc1, "fc1_b": db_fc1, "out_w": dw_out, "out_b": db_out}
    dx_total = None
    for w, (c_conv, c_pool), dp in zip(CNN_KERNEL_SIZES, caches, dsplits):
        dy = layers.global_max_pool_backward(c_pool, dp)
        dk, dcb, dx = layers.conv1d_backward(c_conv, dy)
        grads[f"conv{w}_k"] = dk
        grads[f"conv{w}_b"] = dcb
        dx_total = dx if dx_total is None else dx_total + dx
    grads["emb"] = layers.embedding_backward(ids, dx_total, config.vocab_size)
    return grads


_ARCH_FNS: dict[ArchId, tuple[Callable, Callable, Callable]] = {
    ArchId.LSTM: (_build_lstm, _logits_lstm, _backward_lstm),
    ArchId.LSTM_CONV: (_build_lstm_conv, _logits_lstm_conv, _backward_lstm_conv),
    ArchId.BILSTM: (_build_bilstm, _logits_bilstm, _backward_bilstm),
    ArchId.CNN: (_build_cnn, _logits_cnn, _backward_cnn),
}


def build_model(arch: ArchId, config: ModelConfig, seed: int) -> Model:
    """Initialize a model deterministically from the seed (PCG64)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    build, _, _ = _ARCH_FNS[arch]
    return Model(arch=arch, config=config, params=build(config, rng))


def _as_id_matrix(batch, config: ModelConfig) -> np.ndarray:
    if isinstance(batch, np.ndarray):
        ids = batch
    else:
        ids = np.stack([seq.ids for seq in batch])
    if ids.ndim != 2 or ids.shape[1] != config.seq_len:
        raise ValueError(
            f"expected id matrix of shape (N, {config.seq_len}), got {ids.shape}"
        )
    return ids


def logits(model: Model, batch) -> tuple[np.ndarray, object]:
    """Pre-softmax class scores plus the cache needed by `backward`."""
    ids = _as_id_matrix(batch, model.config)
    _, logits_fn, _ = _ARCH_FNS[model.arch]
    return logits_fn(model.params, model.config, ids)


def backward(model: Model, cache, dlogits: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of the (summed) loss w.r.t. every parameter."""
    _, _, backward_fn = _ARCH_FNS[model.arch]
    return backward_fn(model.params, model.config, cache, dlogits)


def forward(model: Model, batch) -> np.ndarray:
    """Class probability rows, one per input, each summing to 1."""
    scores, _ = logits(model, batch)
    return layers.softmax(scores)

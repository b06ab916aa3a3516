"""Mini-batch training loop, prediction, and model persistence.

Training is deterministic for a fixed seed: one PCG64 generator drives the
per-epoch shuffles, batches are visited sequentially (final partial batch
included), and updates are Adam steps on mean-batch gradients.

The model file is binary: magic ``HGSM``, a format version, the arch name,
the config block, a map of named sha256 digests for companion artifacts
(vocabulary, stop lists), the parameter tensors as little-endian float64
payloads, and a trailing CRC32 of everything before it.
"""

from __future__ import annotations

import struct
import zlib
from dataclasses import dataclass
from typing import IO, Optional, Sequence

import numpy as np

from . import models
from .models import ArchId, Model, ModelConfig
from .nn import Adam
from .nn.layers import softmax_xent
from .vectorize import IdSequence

MAGIC = b"HGSM"
FORMAT_VERSION = 1
_PREDICT_CHUNK = 512


class ModelFormatError(ValueError):
    """Corrupt or unsupported model file."""


@dataclass(frozen=True)
class TrainHyper:
    epochs: int = 200
    batch_size: int = 128
    learning_rate: float = 0.01
    seed: int = 0
    shuffle: bool = True

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    train_accuracy: float
    val_weighted_f1: float  # NaN when no validation set was supplied


@dataclass
class ProbMatrix:
    """Per-model matrix of class probabilities, one row per sentence."""

    rows: np.ndarray  # (N, 3) float64
    model_tag: str = ""

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape[1] != 3:
            raise ValueError(f"probability matrix must be (N, 3), got {self.rows.shape}")
        if self.rows.shape[0]:
            if not np.allclose(self.rows.sum(axis=1), 1.0, rtol=0, atol=1e-9):
                raise ValueError("probability rows must sum to 1")
            if (self.rows <= 0).any() or (self.rows >= 1).any():
                raise ValueError("probabilities must lie strictly inside (0, 1)")

    def __len__(self) -> int:
        return self.rows.shape[0]


def _stack_dataset(dataset: Sequence[IdSequence]):
    ids = np.stack([seq.ids for seq in dataset])
    labels = np.zeros(len(dataset), dtype=np.int64)
    for i, seq in enumerate(dataset):
        if seq.label is None:
            raise ValueError(f"example {i} has no label")
        labels[i] = int(seq.label)
    return ids, labels


def train(
    model: Model,
    train_set: Sequence[IdSequence],
    val_set: Optional[Sequence[IdSequence]] = None,
    hyper: TrainHyper = TrainHyper(),
) -> tuple[Model, list[EpochRecord]]:
    """Train in place; returns the model and one record per epoch."""
    from .metrics import confusion, f1_report  # shared metric code

    if not train_set:
        raise ValueError("empty training set")
    x_train, y_train = _stack_dataset(train_set)
    n = x_train.shape[0]
    if val_set:
        x_val, y_val = _stack_dataset(val_set)

    rng = np.random.Generator(np.random.PCG64(hyper.seed))
    adam = Adam(lr=hyper.learning_rate)
    history: list[EpochRecord] = []

    for epoch in range(1, hyper.epochs + 1):
        order = rng.permutation(n) if hyper.shuffle else np.arange(n)
        loss_sum = 0.0
        correct = 0
        for batch_no, start in enumerate(range(0, n, hyper.batch_size)):
            idx = order[start : start + hyper.batch_size]
            try:
                scores, cache = models.logits(model, x_train[idx])
                losses, probs, dlogits = softmax_xent(scores, y_train[idx])
            except ValueError as err:
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}, batch {batch_no}: {err}"
                ) from err
            if not np.isfinite(losses).all():
                raise RuntimeError(f"non-finite loss at epoch {epoch}, batch {batch_no}")
            grads = models.backward(model, cache, dlogits / len(idx))
            adam.step(model.params, grads)
            loss_sum += losses.sum()
            correct += int((probs.argmax(axis=1) == y_train[idx]).sum())

        if val_set:
            val_pred = predict_proba(model, x_val).rows.argmax(axis=1)
            val_f1 = f1_report(confusion(list(y_val), list(val_pred))).weighted_f1
        else:
            val_f1 = float("nan")
        history.append(EpochRecord(
            epoch=epoch,
            train_loss=loss_sum / n,
            train_accuracy=correct / n,
            val_weighted_f1=val_f1,
        ))
    return model, history


def predict_proba(model: Model, dataset) -> ProbMatrix:
    """Probability rows for a dataset (list of IdSequence or (N, T) ids)."""
    if isinstance(dataset, np.ndarray):
        ids = dataset
    elif len(dataset) == 0:
        return ProbMatrix(rows=np.zeros((0, 3)), model_tag=model.arch.value)
    else:
        ids = np.stack([seq.ids for seq in dataset])
    chunks = [
        models.forward(model, ids[s : s + _PREDICT_CHUNK])
        for s in range(0, ids.shape[0], _PREDICT_CHUNK)
    ]
    rows = np.concatenate(chunks) if chunks else np.zeros((0, 3))
    return ProbMatrix(rows=rows, model_tag=model.arch.value)


def save_history(history: list[EpochRecord], stream: IO[str]) -> None:
    stream.write("epoch\tloss\taccuracy\tval_f1\n")
    for rec in history:
        stream.write(f"{rec.epoch}\t{rec.train_loss:.17g}\t"
                     f"{rec.train_accuracy:.17g}\t{rec.val_weighted_f1:.17g}\n")


# ------------------------------------------------------------- persistence

def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<H", len(raw)) + raw


def save_model(model: Model, stream: IO[bytes],
               artifact_hashes: Optional[dict[str, bytes]] = None) -> None:
    """Serialize; `artifact_hashes` maps artifact names (e.g. "vocab") to
    sha256 digests checked again at predict time."""
    cfg = model.config
    out = bytearray()
    out += MAGIC
    out += struct.pack("<I", FORMAT_VERSION)
    out += _pack_str(model.arch.value)
    out += struct.pack("<7I", cfg.vocab_size, cfg.seq_len, cfg.embedding_dim,
                       cfg.lstm_units, cfg.conv_filters, cfg.dense_hidden,
                       cfg.num_classes)
    hashes = artifact_hashes or {}
    out += struct.pack("<H", len(hashes))
    for name in sorted(hashes):
        digest = hashes[name]
        out += _pack_str(name)
        out += struct.pack("<B", len(digest)) + digest
    out += struct.pack("<I", len(model.params))
    for name, value in model.params.items():
        out += _pack_str(name)
        arr = np.ascontiguousarray(value, dtype=np.float64)
        out += struct.pack("<B", arr.ndim)
        out += struct.pack(f"<{arr.ndim}I", *arr.shape)
        out += arr.tobytes()
    out += struct.pack("<I", zlib.crc32(bytes(out)))
    stream.write(bytes(out))


def load_model(stream: IO[bytes]) -> tuple[Model, dict[str, bytes]]:
    """Inverse of save_model; returns (model, artifact_hashes)."""
    data = stream.read()
    if len(data) < 12 or data[:4] != MAGIC:
        raise ModelFormatError("bad magic: not a model file")
    body, crc_stored = data[:-4], struct.unpack("<I", data[-4:])[0]
    (version,) = struct.unpack_from("<I", body, 4)
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version} (expected {FORMAT_VERSION})")
    if zlib.crc32(body) != crc_stored:
        raise ModelFormatError("checksum mismatch: model file corrupt or truncated")

    off = 8

    def read_str() -> str:
        nonlocal off
        (length,) = struct.unpack_from("<H", body, off)
        off += 2
        s = body[off : off + length].decode("utf-8")
        off += length
        return s

    arch = ArchId.from_string(read_str())
    cfg_vals = struct.unpack_from("<7I", body, off)
    off += 28
    config = ModelConfig(*cfg_vals)
    (n_hashes,) = struct.unpack_from("<H", body, off)
    off += 2
    hashes: dict[str, bytes] = {}
    for _ in range(n_hashes):
        name = read_str()
        (hlen,) = struct.unpack_from("<B", body, off)
        off += 1
        hashes[name] = body[off : off + hlen]
        off += hlen
    (n_params,) = struct.unpack_from("<I", body, off)
    off += 4
    params: dict[str, np.ndarray] = {}
    for _ in range(n_params):
        name = read_str()
        (ndim,) = struct.unpack_from("<B", body, off)
        off += 1
        shape = struct.unpack_from(f"<{ndim}I", body, off)
        off += 4 * ndim
        count = int(np.prod(shape)) if ndim else 1
        arr = np.frombuffer(body, dtype="<f8", count=count, offset=off).reshape(shape)
        off += 8 * count
        params[name] = arr.copy()
    return Model(arch=arch, config=config, params=params), hashes

"""Frequency-ranked vocabulary and fixed-length index encoding.

Index 0 is the padding slot and index 1 the out-of-vocabulary slot; real
tokens start at 2, ranked by training-corpus frequency with ties broken by
first occurrence. Sequences are left-padded and pre-truncated (the last
`seq_len` tokens are kept), the convention recurrent models read best.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from .corpus import Sentiment
from .preprocess import TokenizedTweet

PAD_INDEX = 0
OOV_INDEX = 1
PAD_TOKEN = "<pad>"
OOV_TOKEN = "<oov>"

DEFAULT_VOCAB_SIZE = 20000
DEFAULT_SEQ_LEN = 50


@dataclass(frozen=True)
class Vocabulary:
    """Token-to-index map; `index_of` holds real tokens only (indices >= 2)."""

    index_of: dict[str, int]
    max_size: int

    @property
    def size(self) -> int:
        return len(self.index_of) + 2

    def __contains__(self, token: str) -> bool:
        return token in self.index_of

    def index(self, token: str) -> int:
        return self.index_of.get(token, OOV_INDEX)


@dataclass
class IdSequence:
    ids: np.ndarray  # shape (seq_len,), int64
    label: Optional[Sentiment] = None


def build_vocab(
    corpus: Iterable[TokenizedTweet], max_size: int = DEFAULT_VOCAB_SIZE
) -> Vocabulary:
    """Rank tokens by frequency (ties: first occurrence) and keep the top
    max_size - 2, leaving room for the reserved slots."""
    if max_size < 3:
        raise ValueError(f"max_size must be >= 3, got {max_size}")
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    pos = 0
    for tweet in corpus:
        for tok in tweet.tokens:
            counts[tok] += 1
            if tok not in first_seen:
                first_seen[tok] = pos
            pos += 1
    ranked = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    kept = ranked[: max_size - 2]
    return Vocabulary(
        index_of={tok: i + 2 for i, tok in enumerate(kept)}, max_size=max_size
    )


def encode(
    tokens: Sequence[str], vocab: Vocabulary, seq_len: int = DEFAULT_SEQ_LEN
) -> IdSequence:
    """Map tokens to indices (unknown -> OOV), left-pad with PAD, keep the
    last seq_len when longer."""
    if seq_len < 1:
        raise ValueError(f"seq_len must be >= 1, got {seq_len}")
    ids = [vocab.index(t) for t in tokens[-seq_len:]]
    padded = np.zeros(seq_len, dtype=np.int64)
    if ids:
        padded[-len(ids):] = ids
    return IdSequence(ids=padded)


def encode_corpus(
    corpus: Iterable[TokenizedTweet], vocab: Vocabulary, seq_len: int = DEFAULT_SEQ_LEN
) -> list[IdSequence]:
    out = []
    for tweet in corpus:
        seq = encode(tweet.tokens, vocab, seq_len)
        seq.label = tweet.label
        out.append(seq)
    return out


def save_vocab(vocab: Vocabulary, stream: IO[str]) -> None:
    """`token <TAB> index` lines, reserved slots included, ascending index."""
    stream.write(f"{PAD_TOKEN}\t{PAD_INDEX}\n")
    stream.write(f"{OOV_TOKEN}\t{OOV_INDEX}\n")
    for tok, idx in sorted(vocab.index_of.items(), key=lambda kv: kv[1]):
        stream.write(f"{tok}\t{idx}\n")


def load_vocab(stream: IO[str], max_size: Optional[int] = None) -> Vocabulary:
    index_of: dict[str, int] = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        try:
            tok, idx_s = line.split("\t")
            idx = int(idx_s)
        except ValueError:
            raise ValueError(f"vocabulary line {lineno}: expected 'token<TAB>index'") from None
        if tok in (PAD_TOKEN, OOV_TOKEN):
            continue
        index_of[tok] = idx
    return Vocabulary(index_of=index_of, max_size=max_size or len(index_of) + 2)

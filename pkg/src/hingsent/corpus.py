"""Tweet corpus I/O: TSV and CoNLL-style block parsing, corpus statistics,
and prediction files.

Two on-disk formats are supported. The minimal TSV format is
``id <TAB> text [<TAB> label]`` with one tweet per line; a file either has
the label column on every line or on none. The CoNLL-style block format is
the shared-task distribution layout: blocks separated by blank lines, each
headed by ``meta <uid> [<sentiment>]`` and followed by
``token <TAB> langtag`` lines. Language tags are discarded; the block's
tokens joined by single spaces become the tweet text.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import IntEnum
from typing import IO, Iterable, Optional


class CorpusError(ValueError):
    """Malformed corpus input or inconsistent corpus arguments."""


class Sentiment(IntEnum):
    """3-way sentiment label with its canonical integer encoding."""

    NEGATIVE = 0
    NEUTRAL = 1
    POSITIVE = 2

    @classmethod
    def from_string(cls, s: str) -> "Sentiment":
        """Parse a label string, case-insensitively."""
        try:
            return cls[s.strip().upper()]
        except KeyError:
            raise CorpusError(f"unknown sentiment label: {s!r}") from None

    def label(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class RawTweet:
    """One corpus entry: unique id, raw text, optional gold label."""

    id: str
    text: str
    label: Optional[Sentiment] = None


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    avg_char_length: float
    vocab_size: int
    word_count: int


def _check_unique_ids(tweets: list[RawTweet]) -> None:
    seen: set[str] = set()
    for tw in tweets:
        if not tw.id:
            raise CorpusError("empty tweet id")
        if tw.id in seen:
            raise CorpusError(f"duplicate tweet id: {tw.id!r}")
        seen.add(tw.id)


def parse_tsv(stream: IO[str]) -> list[RawTweet]:
    """Parse a TSV corpus; see the module docstring for the line format.

    The first non-empty line fixes whether the file carries labels (3
    columns) or not (2 columns); any later line with a different column
    count is a parse error naming its line number.
    """
    tweets: list[RawTweet] = []
    ncols: Optional[int] = None
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise CorpusError(
                f"line {lineno}: expected 2 or 3 tab-separated columns, got {len(fields)}"
            )
        if ncols is None:
            ncols = len(fields)
        elif len(fields) != ncols:
            raise CorpusError(
                f"line {lineno}: expected {ncols} columns like the first line, got {len(fields)}"
            )
        label = Sentiment.from_string(fields[2]) if ncols == 3 else None
        tweets.append(RawTweet(id=fields[0], text=fields[1], label=label))
    _check_unique_ids(tweets)
    return tweets


def parse_conll(stream: IO[str]) -> list[RawTweet]:
    """Parse the CoNLL-style block format; see the module docstring."""
    tweets: list[RawTweet] = []
    header: Optional[tuple[str, Optional[Sentiment]]] = None
    tokens: list[str] = []

    def flush() -> None:
        nonlocal header, tokens
        if header is None:
            return
        uid, label = header
        tweets.append(RawTweet(id=uid, text=" ".join(tokens), label=label))
        header, tokens = None, []

    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            flush()
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "meta":
                raise CorpusError(
                    f"line {lineno}: block header must start with 'meta', got {fields[0]!r}"
                )
            if len(fields) not in (2, 3):
                raise CorpusError(
                    f"line {lineno}: header must be 'meta <uid> [<sentiment>]'"
                )
            label = Sentiment.from_string(fields[2]) if len(fields) == 3 else None
            header = (fields[1], label)
        else:
            # token line: `token <TAB> langtag`; the tag is never used
            tokens.append(line.split("\t")[0])
    flush()
    _check_unique_ids(tweets)
    return tweets


def corpus_stats(corpus: Iterable[RawTweet]) -> CorpusStats:
    """Sentence count, mean raw character length, distinct case-folded
    whitespace tokens, and total whitespace tokens.

    Character length counts Unicode scalar values of the raw text,
    spaces included.
    """
    tweets = list(corpus)
    if not tweets:
        raise CorpusError("empty corpus: statistics undefined")
    vocab: set[str] = set()
    word_count = 0
    for tw in tweets:
        toks = tw.text.split()
        word_count += len(toks)
        vocab.update(t.casefold() for t in toks)
    return CorpusStats(
        sentence_count=len(tweets),
        avg_char_length=statistics.fmean(len(tw.text) for tw in tweets),
        vocab_size=len(vocab),
        word_count=word_count,
    )


def write_predictions(ids: list[str], labels: list[Sentiment], stream: IO[str]) -> None:
    """Emit ``id <TAB> label-string`` per line, in input order."""
    if len(ids) != len(labels):
        raise CorpusError(
            f"ids/labels length mismatch: {len(ids)} vs {len(labels)}"
        )
    for uid, label in zip(ids, labels):
        stream.write(f"{uid}\t{label.label()}\n")

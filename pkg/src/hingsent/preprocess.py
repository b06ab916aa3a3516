"""Text cleaning pipeline for code-mixed tweets.

Six steps, applied per tweet in this order: strip twitter handles, strip
URLs, strip punctuation/special symbols, lowercase + tokenize, remove
English stop words (bundled list), stem every token, then remove the
high-frequency "Hindi stop word" list derived by term frequency over the
stemmed dataset (top 1000 by default). Tweets whose token list ends up
empty are kept, so every input row still gets a prediction downstream.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import IO, Iterable, Optional, Sequence

from .corpus import RawTweet, Sentiment
from .stemmer import stem

_HANDLE_RE = re.compile(r"@\S*")
_NON_ALNUM_RE = re.compile(r"[^\w\s]|_", re.UNICODE)

DEFAULT_TF_STOPLIST_SIZE = 1000


class StopSource(Enum):
    BUNDLED_ENGLISH = "bundled-english"
    TF_DERIVED = "tf-derived"


@dataclass(frozen=True)
class StopList:
    words: frozenset[str]
    source: StopSource
    k: Optional[int] = None


@dataclass
class TokenizedTweet:
    id: str
    tokens: list[str]
    label: Optional[Sentiment] = None


def strip_handles(text: str) -> str:
    """Delete every ``@`` plus the non-whitespace run after it."""
    return " ".join(_HANDLE_RE.sub(" ", text).split())


def strip_urls(text: str) -> str:
    """Delete every whitespace-delimited chunk starting with http (any case)."""
    return " ".join(t for t in text.split() if not t.lower().startswith("http"))


def strip_punct(text: str) -> str:
    """Replace every character that is not a letter, digit, or whitespace
    with a single space."""
    return _NON_ALNUM_RE.sub(" ", text)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace runs."""
    return text.lower().split()


def remove_stopwords(tokens: Sequence[str], stoplist: StopList) -> list[str]:
    return [t for t in tokens if t not in stoplist.words]


def encode_label(s: str) -> Sentiment:
    """Map a label string to its 0/1/2 code, case-insensitively."""
    return Sentiment.from_string(s)


def load_english_stoplist(stream: Optional[IO[str]] = None) -> StopList:
    """Load the bundled English stop-word list, or one word per line from
    the given stream."""
    if stream is None:
        text = (resources.files("hingsent") / "data" / "english_stopwords.txt").read_text("utf-8")
    else:
        text = stream.read()
    words = frozenset(w.strip() for w in text.splitlines() if w.strip())
    return StopList(words=words, source=StopSource.BUNDLED_ENGLISH)


def build_tf_stoplist(
    corpora: Iterable[Iterable[TokenizedTweet]], k: int
) -> StopList:
    """The k most frequent tokens across all supplied corpora, raw term
    frequency, ties broken by lexicographic token order."""
    if k < 1:
        raise ValueError(f"stoplist size must be >= 1, got {k}")
    counts: Counter[str] = Counter()
    for corpus in corpora:
        for tweet in corpus:
            counts.update(tweet.tokens)
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return StopList(
        words=frozenset(tok for tok, _ in ranked[:k]),
        source=StopSource.TF_DERIVED,
        k=k,
    )


def save_stoplist(stoplist: StopList, stream: IO[str]) -> None:
    """One word per line, sorted, for reproducible runs."""
    for word in sorted(stoplist.words):
        stream.write(word + "\n")


def load_tf_stoplist(stream: IO[str]) -> StopList:
    words = frozenset(w.strip() for w in stream.read().splitlines() if w.strip())
    return StopList(words=words, source=StopSource.TF_DERIVED, k=len(words))


def clean_and_stem(
    corpus: Iterable[RawTweet], english_stoplist: StopList
) -> list[TokenizedTweet]:
    """Steps 1-6 of the pipeline (everything before the TF stoplist)."""
    out = []
    for tw in corpus:
        text = strip_punct(strip_urls(strip_handles(tw.text)))
        tokens = remove_stopwords(tokenize(text), english_stoplist)
        tokens = [stem(t) for t in tokens]
        out.append(TokenizedTweet(id=tw.id, tokens=tokens, label=tw.label))
    return out


def apply_stoplist(
    corpus: Iterable[TokenizedTweet], stoplist: StopList
) -> list[TokenizedTweet]:
    return [
        TokenizedTweet(id=tw.id, tokens=remove_stopwords(tw.tokens, stoplist), label=tw.label)
        for tw in corpus
    ]


def run_pipeline(
    corpus: Iterable[RawTweet],
    english_stoplist: Optional[StopList] = None,
    hindi_stoplist: Optional[StopList] = None,
    tf_k: int = DEFAULT_TF_STOPLIST_SIZE,
) -> list[TokenizedTweet]:
    """Full per-corpus pipeline. When no TF-derived list is supplied it is
    built with size `tf_k` over this corpus's stemmed tokens. To share one
    TF list across several splits, build it with `build_tf_stoplist` over
    the `clean_and_stem` output of every split and pass it in.
    """
    if english_stoplist is None:
        english_stoplist = load_english_stoplist()
    stemmed = clean_and_stem(corpus, english_stoplist)
    if hindi_stoplist is None:
        hindi_stoplist = build_tf_stoplist([stemmed], tf_k)
    return apply_stoplist(stemmed, hindi_stoplist)

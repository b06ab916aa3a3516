import io
import random

import pytest

from hingsent.corpus import CorpusError, RawTweet, Sentiment
from hingsent.preprocess import (
    StopList,
    StopSource,
    TokenizedTweet,
    build_tf_stoplist,
    clean_and_stem,
    encode_label,
    load_english_stoplist,
    load_tf_stoplist,
    remove_stopwords,
    run_pipeline,
    save_stoplist,
    strip_handles,
    strip_punct,
    strip_urls,
    tokenize,
)


class TestStripHandles:
    def test_leading_handle(self):
        assert strip_handles("@user1 kya baat") == "kya baat"

    def test_identity(self):
        assert strip_handles("no handles here") == "no handles here"

    def test_adjacent_handles(self):
        assert strip_handles("hi @a @b bye") == "hi bye"

    def test_mid_token_at(self):
        assert strip_handles("a@b c") == "a c"


class TestStripUrls:
    def test_basic(self):
        assert strip_urls("see https://t.co/xyz now") == "see now"

    def test_case_insensitive(self):
        assert strip_urls("HTTP://A.B end") == "end"

    def test_identity(self):
        assert strip_urls("no links") == "no links"


class TestStripPunct:
    def test_emoticons(self):
        assert tokenize(strip_punct("achha!!! :-)")) == ["achha"]

    def test_hash_separates(self):
        assert strip_punct("a#b") == "a b"

    def test_identity(self):
        assert strip_punct("abc 123") == "abc 123"

    def test_underscore_removed(self):
        assert strip_punct("a_b") == "a b"


class TestTokenize:
    def test_lowercases_and_splits(self):
        assert tokenize("Kya  Baat") == ["kya", "baat"]

    def test_empty(self):
        assert tokenize("") == []

    def test_digits_kept(self):
        assert tokenize("A1 b2") == ["a1", "b2"]


def _random_noise_strings(n=1000, seed=20200912):
    rng = random.Random(seed)
    alphabet = list("abcdefgHIJ @#$%!?.:/-_'\"\téहि 0123456789") + ["http", "@user", "https://x.y/z"]
    out = []
    for _ in range(n):
        out.append("".join(rng.choice(alphabet) for _ in range(rng.randint(0, 30))))
    return out


@pytest.mark.parametrize("op", [strip_handles, strip_urls, strip_punct],
                         ids=["handles", "urls", "punct"])
def test_noise_ops_idempotent(op):
    for s in _random_noise_strings():
        once = op(s)
        assert op(once) == once


def test_english_stoplist_removal():
    stoplist = load_english_stoplist()
    assert remove_stopwords(["the", "movie", "is", "accha"], stoplist) == ["movie", "accha"]


def test_bundled_stoplist_size():
    assert len(load_english_stoplist().words) == 179


def test_remove_stopwords_empty():
    assert remove_stopwords([], load_english_stoplist()) == []


def test_remove_stopwords_identity_when_disjoint():
    stoplist = StopList(words=frozenset({"x"}), source=StopSource.TF_DERIVED, k=1)
    tokens = ["accha", "movi"]
    assert remove_stopwords(tokens, stoplist) == tokens


def test_remove_stopwords_is_subsequence():
    stoplist = load_english_stoplist()
    tokens = ["a", "zebra", "the", "lion", "is", "big"]
    kept = remove_stopwords(tokens, stoplist)
    it = iter(tokens)
    assert all(t in it for t in kept)


def _tok(tokens):
    return TokenizedTweet(id="x", tokens=tokens)


class TestBuildTfStoplist:
    def test_hand_count(self):
        corpora = [[_tok(["a", "a", "b"]), _tok(["a", "b", "c"])]]
        assert build_tf_stoplist(corpora, 2).words == {"a", "b"}

    def test_saturation(self):
        corpora = [[_tok(["a", "b"])]]
        assert build_tf_stoplist(corpora, 10).words == {"a", "b"}

    def test_lexicographic_tiebreak(self):
        corpora = [[_tok(["a", "b", "a", "b"])]]
        assert build_tf_stoplist(corpora, 1).words == {"a"}

    def test_rejects_nonpositive_k(self):
        with pytest.raises(ValueError):
            build_tf_stoplist([[_tok(["a"])]], 0)

    def test_size_is_min_of_k_and_distinct(self):
        corpora = [[_tok(list("aabbccd"))]]
        for k in range(1, 8):
            assert len(build_tf_stoplist(corpora, k).words) == min(k, 4)

    def test_permutation_invariant(self):
        tweets = [_tok(["x", "y"]), _tok(["y", "z"]), _tok(["z", "z"])]
        a = build_tf_stoplist([tweets], 2).words
        b = build_tf_stoplist([list(reversed(tweets))], 2).words
        assert a == b

    def test_counts_pool_across_corpora(self):
        c1 = [_tok(["a", "b"])]
        c2 = [_tok(["b", "c"])]
        assert build_tf_stoplist([c1, c2], 1).words == {"b"}


class TestEncodeLabel:
    def test_paper_codes(self):
        assert encode_label("negative") == 0
        assert encode_label("neutral") == 1
        assert encode_label("positive") == 2

    def test_case_insensitive(self):
        assert encode_label("Positive") == 2

    def test_unknown_named(self):
        with pytest.raises(CorpusError, match="meh"):
            encode_label("meh")


class TestPipeline:
    def test_hand_trace_before_tf_step(self):
        corpus = [RawTweet("1", "@u This movie is accha http://x !!")]
        stemmed = clean_and_stem(corpus, load_english_stoplist())
        assert stemmed[0].tokens == ["movi", "accha"]

    def test_degenerate_tweet_retained_empty(self):
        corpus = [RawTweet("1", "@only_a_handle http://and.a.url")]
        out = run_pipeline(corpus, tf_k=5)
        assert len(out) == 1
        assert out[0].tokens == []

    def test_label_passthrough(self):
        corpus = [RawTweet("1", "accha film", label=None),
                  RawTweet("2", "bura film", label=Sentiment.NEGATIVE)]
        out = run_pipeline(corpus, tf_k=1000)
        assert out[0].label is None
        assert out[1].label is Sentiment.NEGATIVE

    def test_tf_list_built_over_stemmed_tokens(self):
        # "filmon"/"filmon" stem to the same form; the TF list must count
        # the stemmed form, so k=1 removes it from every tweet.
        corpus = [RawTweet("1", "filming filming zabardast"),
                  RawTweet("2", "filming accha")]
        out = run_pipeline(corpus, tf_k=1)
        assert out[0].tokens == ["zabardast"]
        assert out[1].tokens == ["accha"]

    def test_output_tokens_lowercase_alnum(self):
        corpus = [RawTweet("1", "Movie WOW!! @x 123 http://y GR8 chalega")]
        out = run_pipeline(corpus, tf_k=1000)
        for tok in out[0].tokens:
            assert tok
            assert tok == tok.lower()
            assert all(ch.isalnum() for ch in tok)

    def test_explicit_hindi_stoplist_used(self):
        hindi = StopList(words=frozenset({"accha"}), source=StopSource.TF_DERIVED, k=1)
        corpus = [RawTweet("1", "accha zabardast")]
        out = run_pipeline(corpus, hindi_stoplist=hindi)
        assert out[0].tokens == ["zabardast"]


def test_stoplist_save_load_roundtrip():
    stoplist = build_tf_stoplist([[_tok(["b", "a", "b"])]], 2)
    buf = io.StringIO()
    save_stoplist(stoplist, buf)
    buf.seek(0)
    assert load_tf_stoplist(buf).words == stoplist.words

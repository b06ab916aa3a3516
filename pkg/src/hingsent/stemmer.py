"""English Snowball (Porter2) stemmer.

Implements the published algorithm: R1/R2 region offsets, the exceptional
word lists, and suffix steps 0 through 5. Words of length <= 2 are returned
unchanged, as are words containing anything besides ASCII letters and
apostrophes (digits are common in tweets, e.g. "gr8", and the algorithm is
defined over letters only).

Within a step the longest matching suffix decides; if its region condition
fails, no other suffix of that step is tried. All suffix edits happen at
the tail of the word, so the region offsets computed up front stay valid
throughout.
"""

from __future__ import annotations

import re

_VOWELS = "aeiouy"  # marked consonant-y ("Y") is deliberately not a vowel
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDINGS = "cdeghkmnrt"
_WORD_RE = re.compile(r"[a-z']+")

# irregular stems checked before the suffix steps
_EXCEPTIONS = {
    "skis": "ski",
    "skies": "sky",
    "dying": "die",
    "lying": "lie",
    "tying": "tie",
    "idly": "idl",
    "gently": "gentl",
    "ugly": "ugli",
    "early": "earli",
    "only": "onli",
    "singly": "singl",
    "sky": "sky",
    "news": "news",
    "howe": "howe",
    "atlas": "atlas",
    "cosmos": "cosmos",
    "bias": "bias",
    "andes": "andes",
}

# invariant forms checked after step 1a
_EXCEPTIONS_POST_1A = frozenset(
    ["inning", "outing", "canning", "herring", "earring",
     "proceed", "exceed", "succeed"]
)

_STEP2_RULES = [
    ("ization", "ize"),
    ("ational", "ate"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("iveness", "ive"),
    ("tional", "tion"),
    ("biliti", "ble"),
    ("lessli", "less"),
    ("entli", "ent"),
    ("ation", "ate"),
    ("alism", "al"),
    ("aliti", "al"),
    ("ousli", "ous"),
    ("iviti", "ive"),
    ("fulli", "ful"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("abli", "able"),
    ("izer", "ize"),
    ("ator", "ate"),
    ("alli", "al"),
    ("bli", "ble"),
    ("ogi", "og"),
    ("li", ""),
]

_STEP3_RULES = [
    ("ational", "ate"),
    ("tional", "tion"),
    ("alize", "al"),
    ("icate", "ic"),
    ("iciti", "ic"),
    ("ative", ""),
    ("ical", "ic"),
    ("ness", ""),
    ("ful", ""),
]

_STEP4_SUFFIXES = (
    "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent",
    "ism", "ate", "iti", "ous", "ive", "ize", "ion", "al", "er", "ic",
)


def _region_after(word: str, start: int) -> int:
    """Offset just past the first non-vowel that follows a vowel, scanning
    pairs from `start`; end of word when there is none."""
    for i in range(start + 1, len(word)):
        if word[i] not in _VOWELS and word[i - 1] in _VOWELS:
            return i + 1
    return len(word)


def _mark_regions(word: str) -> tuple[int, int]:
    if word.startswith(("gener", "arsen")):
        p1 = 5
    elif word.startswith("commun"):
        p1 = 6
    else:
        p1 = _region_after(word, 0)
    return p1, _region_after(word, p1)


def _in_region(word: str, p: int, suffix: str) -> bool:
    return len(word) - len(suffix) >= p


def _ends_short_syllable(word: str) -> bool:
    if len(word) == 2:
        return word[0] in _VOWELS and word[1] not in _VOWELS
    if len(word) >= 3:
        return (
            word[-1] not in _VOWELS
            and word[-1] not in "wxY"
            and word[-2] in _VOWELS
            and word[-3] not in _VOWELS
        )
    return False


def _mark_consonant_ys(word: str) -> str:
    chars = list(word)
    if chars[0] == "y":
        chars[0] = "Y"
    for i in range(1, len(chars)):
        if chars[i] == "y" and chars[i - 1] in _VOWELS:
            chars[i] = "Y"
    return "".join(chars)


def _step_0(word: str) -> str:
    for suffix in ("'s'", "'s", "'"):
        if word.endswith(suffix):
            return word[: -len(suffix)]
    return word


def _step_1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith(("ied", "ies")):
        return word[:-2] if len(word) > 4 else word[:-1]
    if word.endswith(("us", "ss")):
        return word
    if word.endswith("s"):
        if any(ch in _VOWELS for ch in word[:-2]):
            return word[:-1]
    return word


def _step_1b(word: str, p1: int) -> str:
    for suffix in ("eedly", "eed"):
        if word.endswith(suffix):
            if _in_region(word, p1, suffix):
                return word[: -len(suffix)] + "ee"
            return word
    for suffix in ("ingly", "edly", "ing", "ed"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if not any(ch in _VOWELS for ch in stem):
                return word
            if stem.endswith(("at", "bl", "iz")):
                return stem + "e"
            if stem.endswith(_DOUBLES):
                return stem[:-1]
            if p1 >= len(stem) and _ends_short_syllable(stem):
                return stem + "e"
            return stem
    return word


def _step_1c(word: str) -> str:
    if len(word) > 2 and word[-1] in "yY" and word[-2] not in _VOWELS:
        return word[:-1] + "i"
    return word


def _step_2(word: str, p1: int) -> str:
    for suffix, repl in _STEP2_RULES:
        if word.endswith(suffix):
            if _in_region(word, p1, suffix):
                if suffix == "ogi":
                    if len(word) >= 4 and word[-4] == "l":
                        return word[:-1]
                elif suffix == "li":
                    if len(word) >= 3 and word[-3] in _LI_ENDINGS:
                        return word[:-2]
                else:
                    return word[: -len(suffix)] + repl
            return word
    return word


def _step_3(word: str, p1: int, p2: int) -> str:
    for suffix, repl in _STEP3_RULES:
        if word.endswith(suffix):
            if _in_region(word, p1, suffix):
                if suffix == "ative":
                    if _in_region(word, p2, suffix):
                        return word[:-5]
                else:
                    return word[: -len(suffix)] + repl
            return word
    return word


def _step_4(word: str, p2: int) -> str:
    for suffix in _STEP4_SUFFIXES:
        if word.endswith(suffix):
            if _in_region(word, p2, suffix):
                if suffix == "ion":
                    if len(word) >= 4 and word[-4] in "st":
                        return word[:-3]
                else:
                    return word[: -len(suffix)]
            return word
    return word


def _step_5(word: str, p1: int, p2: int) -> str:
    if word.endswith("e"):
        if _in_region(word, p2, "e"):
            return word[:-1]
        if _in_region(word, p1, "e") and not _ends_short_syllable(word[:-1]):
            return word[:-1]
        return word
    if word.endswith("l"):
        if _in_region(word, p2, "l") and len(word) >= 2 and word[-2] == "l":
            return word[:-1]
    return word


def stem(word: str) -> str:
    """Return the Porter2 English stem of a lowercase word."""
    if len(word) <= 2 or not _WORD_RE.fullmatch(word):
        return word
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]

    if word.startswith("'"):
        word = word[1:]
    if not word:
        return word
    word = _mark_consonant_ys(word)
    p1, p2 = _mark_regions(word)

    word = _step_0(word)
    word = _step_1a(word)
    if word in _EXCEPTIONS_POST_1A:
        return word
    word = _step_1b(word, p1)
    word = _step_1c(word)
    word = _step_2(word, p1)
    word = _step_3(word, p1, p2)
    word = _step_4(word, p2)
    word = _step_5(word, p1, p2)

    return word.replace("Y", "y")

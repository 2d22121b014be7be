# app/domain/services/text_cleaner.py
"""Removal of bad characters and whitespace tokenization.

Emoji sequences always survive cleaning. Emoticons (":-D", ":(") are made of
punctuation, so callers pass the emoticon keys that must survive until the
emot stage; they are matched on the raw text before any punctuation is
stripped.
"""
import unicodedata
from functools import lru_cache
from typing import FrozenSet, Iterable, Tuple

import regex

from app.domain.entities.pipeline import TokenSequence

EMOJI_SEQUENCE = (
    r"(?:\p{Regional_Indicator}\p{Regional_Indicator}"
    r"|\p{Extended_Pictographic}[\uFE0F\p{Emoji_Modifier}]*"
    r"(?:\u200D\p{Extended_Pictographic}[\uFE0F\p{Emoji_Modifier}]*)*)"
)
EMOJI_RUN = regex.compile(f"(?:{EMOJI_SEQUENCE})+")

# Punctuation (incl. the danda), symbols, control characters and invisible
# format characters. ZWJ/ZWNJ stay: Bangla conjuncts depend on them.
BAD_CHARACTERS = regex.compile(r"[\p{P}\p{S}\p{Cc}\u00AD\u200B\u2060\uFEFF]")
PUNCTUATION_ONLY = regex.compile(r"[\p{P}\p{S}]+")


@lru_cache(maxsize=32)
def _protected_pattern(emoticons: Tuple[str, ...]):
    alternatives = []
    for emoticon in sorted(emoticons, key=len, reverse=True):
        piece = regex.escape(emoticon)
        if emoticon[0].isalnum():
            piece = r"(?<![\p{L}\p{N}])" + piece
        if emoticon[-1].isalnum():
            piece = piece + r"(?![\p{L}\p{N}])"
        alternatives.append(piece)
    alternatives.append(EMOJI_SEQUENCE + "+")
    return regex.compile("|".join(alternatives))


def _strip_segment(segment: str) -> str:
    return BAD_CHARACTERS.sub(" ", segment)


def clean(text: str, emoticons: Iterable[str] = ()) -> str:
    """Strip punctuation and bad characters; keep emoji (and the given emoticons)."""
    text = unicodedata.normalize("NFC", text)
    pattern = _protected_pattern(tuple(sorted(set(emoticons))))
    pieces = []
    position = 0
    for match in pattern.finditer(text):
        pieces.append(_strip_segment(text[position:match.start()]))
        pieces.append(match.group())
        position = match.end()
    pieces.append(_strip_segment(text[position:]))
    return " ".join(" ".join(pieces).split())


def tokenize(text: str, keep: FrozenSet[str] = frozenset()) -> TokenSequence:
    """Maximal runs of non-whitespace; punctuation-only tokens are discarded unless kept or emoji."""
    return [
        token for token in text.split()
        if token in keep or EMOJI_RUN.fullmatch(token) or not PUNCTUATION_ONLY.fullmatch(token)
    ]


def grapheme_length(text: str) -> int:
    return len(regex.findall(r"\X", text))

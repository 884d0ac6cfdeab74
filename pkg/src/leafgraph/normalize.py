"""Text normalization used for label identity and lexicon matching.

Labels keep their original casing for display; identity, matching, and
corpus terms all use the normalized form: NFKC, lowercased, whitespace
collapsed.
"""

from __future__ import annotations

import re
import unicodedata

_WHITESPACE = re.compile(r"\s+")
_WORD = re.compile(r"[^\W_]+", re.UNICODE)


def normalize_label(text: str) -> str:
    """Canonical form of a label: NFKC, trimmed, lowercase, single spaces."""
    folded = unicodedata.normalize("NFKC", text).lower()
    return _WHITESPACE.sub(" ", folded).strip()


def word_tokens(text: str) -> list[str]:
    """Unicode word tokens of a normalized string; punctuation is dropped.

    "situation-of(time of day)" -> ["situation", "of", "time", "of", "day"]
    """
    return _WORD.findall(normalize_label(text))

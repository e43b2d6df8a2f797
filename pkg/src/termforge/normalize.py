"""String normalization used by the norm-match stage and fuzzy similarity.

Pipeline: strip possessives per whitespace token, fold punctuation and
symbols to spaces, tokenize, lowercase, drop stop words, sort tokens.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

DEFAULT_STOP_WORDS = frozenset(
    {"a", "an", "and", "by", "for", "in", "of", "on", "the", "to", "with", "nos"}
)

_APOSTROPHES = ("'", "’")


@dataclass(frozen=True)
class NormalizedString:
    tokens: tuple[str, ...]

    @property
    def joined(self) -> str:
        return " ".join(self.tokens)

    def __bool__(self) -> bool:
        return bool(self.tokens)


def strip_possessives(token: str) -> str:
    """Remove one trailing 's / 'S / bare apostrophe. Not recursive."""
    if len(token) >= 2 and token[-2] in _APOSTROPHES and token[-1] in ("s", "S"):
        return token[:-2]
    if token and token[-1] in _APOSTROPHES:
        return token[:-1]
    return token


def _is_punct_or_symbol(ch: str) -> bool:
    return unicodedata.category(ch)[0] in ("P", "S")


def normalize(raw: str, stop_words: frozenset[str] = DEFAULT_STOP_WORDS) -> NormalizedString:
    """Normalize a term string; empty input yields an empty result."""
    text = unicodedata.normalize("NFC", raw)
    text = " ".join(strip_possessives(tok) for tok in text.split())
    text = "".join(" " if _is_punct_or_symbol(ch) else ch for ch in text)
    words = [w.lower() for w in text.split()]
    kept = [w for w in words if w not in stop_words]
    return NormalizedString(tuple(sorted(kept)))


def load_stop_words(path: str | Path) -> frozenset[str]:
    """Read a stop-word override file: one token per line, '#' comments."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return frozenset(words)

"""Imageability and concreteness lexicons.

Lexicon files are UTF-8 TSV, ``word<TAB>imageability<TAB>concreteness``,
with ``#`` comment lines. Words are keyed by their normalized form; a word
missing from the lexicon gets the lexicon's mean scores.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .errors import FormatError, ValidationError
from .g2p import normalize_word

log = logging.getLogger(__name__)


class LexiconHit(NamedTuple):
    imageability: float
    concreteness: float
    was_oov: bool


@dataclass(frozen=True)
class Lexicon:
    language: str
    entries: dict = field(repr=False)
    means: tuple[float, float] = (0.0, 0.0)
    warnings: tuple[str, ...] = field(default=(), repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_entries(cls, language: str, entries: dict, warnings=()) -> "Lexicon":
        if not entries:
            raise ValidationError(f"lexicon for {language!r} is empty")
        for word, scores in entries.items():
            if not all(math.isfinite(s) for s in scores):
                raise ValidationError(f"non-finite score for {word!r}")
        n = len(entries)
        img = math.fsum(s[0] for s in entries.values()) / n
        conc = math.fsum(s[1] for s in entries.values()) / n
        return cls(language, dict(entries), (img, conc), tuple(warnings))

    @classmethod
    def constant(cls, language: str, imageability: float, concreteness: float) -> "Lexicon":
        """An entry-less lexicon answering every lookup with fixed scores."""
        return cls(language, {}, (float(imageability), float(concreteness)))


def load_lexicon(path, language: str | None = None) -> Lexicon:
    path = Path(path)
    language = language or path.stem
    entries: dict[str, tuple[float, float]] = {}
    warnings = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise FormatError(
                    f"expected 3 tab-separated columns, got {len(cols)}", path, lineno
                )
            try:
                scores = (float(cols[1]), float(cols[2]))
            except ValueError:
                raise FormatError(f"non-numeric score in {cols[1:]!r}", path, lineno) from None
            if not all(math.isfinite(s) for s in scores):
                raise FormatError("non-finite score", path, lineno)
            word = normalize_word(cols[0])
            if word in entries:
                msg = f"{path}:{lineno}: duplicate word {word!r}, keeping the later row"
                log.warning(msg)
                warnings.append(msg)
            entries[word] = scores
    if not entries:
        raise FormatError("lexicon has no entries", path)
    return Lexicon.from_entries(language, entries, warnings)


def lookup(lex: Lexicon, word: str) -> LexiconHit:
    hit = lex.entries.get(normalize_word(word))
    if hit is None:
        return LexiconHit(lex.means[0], lex.means[1], True)
    return LexiconHit(hit[0], hit[1], False)

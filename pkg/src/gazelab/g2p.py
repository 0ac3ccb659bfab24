"""Rule-based grapheme-to-phoneme transduction into IPA.

A language is described by a mapping file: an ordered list of
``source<TAB>target`` rewrite rules plus an optional ``[vowels]`` section.
Words are rewritten greedily left to right, always taking the longest rule
source that matches at the current position. Characters no rule covers are
copied through unchanged and flagged.

Phonemes are extended grapheme clusters, so combining diacritics stay on
their base symbol. Spacing modifier letters (``ː``, ``ʰ``, ``ʲ`` ...) and
tie-barred affricates are folded into a single phoneme as well.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import regex

from .errors import FormatError

__all__ = [
    "MappingTable",
    "IpaString",
    "segment",
    "load_mapping",
    "parse_mapping",
    "dump_mapping",
    "default_vowels",
    "normalize_word",
    "transcribe",
    "count_vowels",
]

VOWELS_HEADER = "[vowels]"

_CLUSTER = regex.compile(r"\X")
_TIE_BARS = ("͡", "͜")
_STRESS = frozenset("ˈˌ")


def _is_modifier(cluster: str) -> bool:
    return all(
        unicodedata.category(c) == "Lm" and c not in _STRESS for c in cluster
    )


def segment(text: str) -> tuple[str, ...]:
    """Split an IPA string into phoneme symbols.

    >>> segment("t͡ʃaːb")
    ('t͡ʃ', 'aː', 'b')
    """
    out: list[str] = []
    join_next = False
    for cluster in _CLUSTER.findall(unicodedata.normalize("NFC", text)):
        if cluster.isspace():
            join_next = False
            continue
        if out and (join_next or _is_modifier(cluster)):
            out[-1] += cluster
        else:
            out.append(cluster)
        join_next = out[-1].endswith(_TIE_BARS)
    return tuple(out)


def _base_symbol(phoneme: str) -> str:
    return "".join(
        c
        for c in unicodedata.normalize("NFD", phoneme)
        if not unicodedata.combining(c) and unicodedata.category(c) != "Lm"
    )


@dataclass(frozen=True)
class IpaString:
    phonemes: tuple[str, ...] = ()
    had_unmapped: bool = False

    def __len__(self) -> int:
        return len(self.phonemes)

    def __iter__(self):
        return iter(self.phonemes)

    def __str__(self) -> str:
        return "".join(self.phonemes)

    @classmethod
    def from_symbols(cls, symbols) -> "IpaString":
        """Build from an iterable of phonemes or a space-separated string."""
        if isinstance(symbols, str):
            symbols = symbols.split()
        return cls(tuple(symbols))


@dataclass(frozen=True)
class MappingTable:
    """Grapheme-to-IPA rules for one language.

    ``rules`` is kept longest-source-first (stable among equal lengths);
    ``vowels`` keeps declaration order, ``vowel_set`` is for membership.
    """

    language: str
    rules: tuple[tuple[str, tuple[str, ...]], ...]
    vowels: tuple[str, ...]
    vowel_set: frozenset = field(init=False, repr=False, compare=False)
    _lookup: dict = field(init=False, repr=False, compare=False)
    _max_len: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {}
        for source, target in self.rules:
            if not source:
                raise ValueError("rule with empty source")
            if source in lookup:
                raise ValueError(f"duplicate rule source {source!r}")
            lookup[source] = target
        ordered = tuple(sorted(self.rules, key=lambda r: -len(r[0])))
        object.__setattr__(self, "rules", ordered)
        object.__setattr__(self, "vowel_set", frozenset(self.vowels))
        object.__setattr__(self, "_lookup", lookup)
        object.__setattr__(self, "_max_len", max((len(s) for s in lookup), default=0))

    def __len__(self) -> int:
        return len(self.rules)

    def is_vowel(self, phoneme: str) -> bool:
        return phoneme in self.vowel_set or _base_symbol(phoneme) in self.vowel_set


def _target_phonemes(target: str) -> tuple[str, ...]:
    # whitespace in a target marks explicit phoneme boundaries
    if any(c.isspace() for c in target):
        return tuple(target.split())
    return segment(target)


def parse_mapping(text: str, language: str, path=None) -> MappingTable:
    rules = []
    seen: dict[str, int] = {}
    vowels: list[str] | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        if line.strip() == VOWELS_HEADER:
            if vowels is not None:
                raise FormatError("repeated [vowels] section", path, lineno)
            vowels = []
            continue
        if vowels is not None:
            vowels.append(unicodedata.normalize("NFC", line.strip()))
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise FormatError(
                f"expected 2 tab-separated columns, got {len(cols)}", path, lineno
            )
        source = unicodedata.normalize("NFC", cols[0])
        if not source:
            raise FormatError("empty rule source", path, lineno)
        if source in seen:
            raise FormatError(
                f"duplicate source {source!r} (first on line {seen[source]})",
                path,
                lineno,
            )
        seen[source] = lineno
        rules.append((source, _target_phonemes(cols[1])))
    if vowels is None:
        vowels = list(default_vowels())
    return MappingTable(language, tuple(rules), tuple(dict.fromkeys(vowels)))


def load_mapping(path, language: str | None = None) -> MappingTable:
    """Read a mapping file; the language defaults to the file stem."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_mapping(text, language or path.stem, path=path)


def dump_mapping(table: MappingTable) -> str:
    lines = []
    for source, target in table.rules:
        joined = "".join(target)
        if segment(joined) != target:
            joined = " ".join(target)
        lines.append(f"{source}\t{joined}")
    lines.append(VOWELS_HEADER)
    lines.extend(table.vowels)
    return "\n".join(lines) + "\n"


_DEFAULT_VOWELS: tuple[str, ...] | None = None


def default_vowels() -> tuple[str, ...]:
    """Vowel symbols of the standard IPA chart, shipped as ``data/default.map``."""
    global _DEFAULT_VOWELS
    if _DEFAULT_VOWELS is None:
        text = resources.files("gazelab").joinpath("data/default.map").read_text("utf-8")
        in_vowels = False
        symbols = []
        for line in text.splitlines():
            if line.strip() == VOWELS_HEADER:
                in_vowels = True
            elif in_vowels and line.strip() and not line.startswith("#"):
                symbols.append(line.strip())
        _DEFAULT_VOWELS = tuple(symbols)
    return _DEFAULT_VOWELS


def normalize_word(raw: str) -> str:
    """Lowercase and strip edge punctuation; inner characters are kept."""
    word = unicodedata.normalize("NFC", raw).lower()
    start, end = 0, len(word)
    while start < end and _is_edge_junk(word[start]):
        start += 1
    while end > start and _is_edge_junk(word[end - 1]):
        end -= 1
    return word[start:end]


def _is_edge_junk(char: str) -> bool:
    return char.isspace() or unicodedata.category(char).startswith("P")


def _cluster_ends(word: str) -> list[int]:
    ends = [0] * len(word)
    pos = 0
    for cluster in _CLUSTER.findall(word):
        stop = pos + len(cluster)
        for i in range(pos, stop):
            ends[i] = stop
        pos = stop
    return ends


def transcribe(word: str, table: MappingTable) -> IpaString:
    """Greedy longest-match rewrite of ``word`` (already normalized)."""
    lookup = table._lookup
    n = len(word)
    out: list[str] = []
    unmapped = False
    ends = None
    i = 0
    while i < n:
        for width in range(min(table._max_len, n - i), 0, -1):
            target = lookup.get(word[i : i + width])
            if target is not None:
                out.extend(target)
                i += width
                break
        else:
            if ends is None:
                ends = _cluster_ends(word)
            out.append(word[i : ends[i]])
            unmapped = True
            i = ends[i]
    return IpaString(tuple(out), unmapped)


def count_vowels(ipa: IpaString, table: MappingTable) -> int:
    return sum(1 for p in ipa.phonemes if table.is_vowel(p))

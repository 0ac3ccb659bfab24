"""Per-word predictors computed in IPA space.

Fourteen features per token, in this column order::

    word_len ipa_len ipa_count ipa_norm
    bigram_count trigram_count bigram_sum trigram_sum bigram_norm trigram_norm
    imageability concreteness phonetic_comp ipa_ent

plus ``ffd_hat`` (a predicted first-fixation duration) when the TRT model is
cascaded on the FFD model. All ratios are 0 for a word with no phonemes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import astuple, dataclass, fields

from .g2p import IpaString, MappingTable, count_vowels, normalize_word
from .lexicons import Lexicon, lookup
from .lm import CharNgramLM, entropy, phonotactic_complexity

FEATURE_NAMES = (
    "word_len",
    "ipa_len",
    "ipa_count",
    "ipa_norm",
    "bigram_count",
    "trigram_count",
    "bigram_sum",
    "trigram_sum",
    "bigram_norm",
    "trigram_norm",
    "imageability",
    "concreteness",
    "phonetic_comp",
    "ipa_ent",
)
CASCADE_FEATURE = "ffd_hat"
NORM_BASES = ("ipa", "ortho")


@dataclass(frozen=True)
class NgramProfile:
    n: int
    grams: Counter

    @property
    def unique(self) -> int:
        return len(self.grams)

    @property
    def total(self) -> int:
        return sum(self.grams.values())


@dataclass(frozen=True)
class FeatureVector:
    word_len: int
    ipa_len: int
    ipa_count: int
    ipa_norm: float
    bigram_count: int
    trigram_count: int
    bigram_sum: int
    trigram_sum: int
    bigram_norm: float
    trigram_norm: float
    imageability: float
    concreteness: float
    phonetic_comp: float
    ipa_ent: float
    ffd_hat: float | None = None
    was_oov: bool = False

    def as_row(self) -> list[float]:
        row = [float(v) for v in astuple(self)[: len(FEATURE_NAMES)]]
        if self.ffd_hat is not None:
            row.append(float(self.ffd_hat))
        return row


assert tuple(f.name for f in fields(FeatureVector))[: len(FEATURE_NAMES)] == FEATURE_NAMES


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def length_features(word: str, ipa: IpaString, table: MappingTable):
    """Return (word_len, ipa_len, ipa_count, ipa_norm)."""
    ipa_len = len(ipa)
    ipa_count = count_vowels(ipa, table)
    return len(word), ipa_len, ipa_count, _ratio(ipa_count, ipa_len)


def ngram_profile(ipa, n: int) -> NgramProfile:
    if n not in (2, 3):
        raise ValueError(f"n-gram order must be 2 or 3, got {n}")
    symbols = ipa.phonemes if isinstance(ipa, IpaString) else tuple(ipa)
    grams = Counter(symbols[i : i + n] for i in range(len(symbols) - n + 1))
    return NgramProfile(n, grams)


def ngram_features(profile: NgramProfile, length: int):
    """Return (unique count, total count, unique count / length)."""
    return profile.unique, profile.total, _ratio(profile.unique, length)


def extract(
    word: str,
    ipa: IpaString,
    table: MappingTable,
    lm: CharNgramLM,
    lexicon: Lexicon,
    norm_base: str = "ipa",
) -> FeatureVector:
    """Assemble the fourteen features for one normalized word."""
    if norm_base not in NORM_BASES:
        raise ValueError(f"norm_base must be one of {NORM_BASES}, got {norm_base!r}")
    word_len, ipa_len, ipa_count, ipa_norm = length_features(word, ipa, table)
    base = ipa_len if norm_base == "ipa" else word_len
    bi_count, bi_sum, bi_norm = ngram_features(ngram_profile(ipa, 2), base)
    tri_count, tri_sum, tri_norm = ngram_features(ngram_profile(ipa, 3), base)
    hit = lookup(lexicon, word)
    return FeatureVector(
        word_len=word_len,
        ipa_len=ipa_len,
        ipa_count=ipa_count,
        ipa_norm=ipa_norm,
        bigram_count=bi_count,
        trigram_count=tri_count,
        bigram_sum=bi_sum,
        trigram_sum=tri_sum,
        bigram_norm=bi_norm,
        trigram_norm=tri_norm,
        imageability=hit.imageability,
        concreteness=hit.concreteness,
        phonetic_comp=phonotactic_complexity(lm, ipa),
        ipa_ent=entropy(ipa),
        was_oov=hit.was_oov,
    )


def extract_token(token, table, lm, lexicon, norm_base="ipa") -> FeatureVector:
    """Like :func:`extract`, taking a :class:`~gazelab.corpus.Token` with IPA set."""
    if token.ipa is None:
        raise ValueError(f"token {token.row_id} has no IPA form")
    return extract(normalize_word(token.word), token.ipa, table, lm, lexicon, norm_base)

"""Character n-gram language model over IPA phonemes and the
information-theoretic word features built on it.

Words are padded with ``order - 1`` start markers and one end marker. The
end marker is a predicted outcome and therefore part of ``vocab``; the start
marker never is. Probabilities use add-alpha smoothing with one extra slot
for unseen symbols::

    P(s | ctx) = (C(ctx + s) + alpha) / (C(ctx) + alpha * (|vocab| + 1))
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field

from .errors import FormatError, ValidationError
from .g2p import IpaString

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

LM_FORMAT = "gazelab-char-lm"
LM_VERSION = 1


def _symbols(ipa) -> tuple[str, ...]:
    if isinstance(ipa, IpaString):
        return ipa.phonemes
    return tuple(ipa)


@dataclass(frozen=True)
class CharNgramLM:
    order: int
    alpha: float
    vocab: frozenset
    gram_counts: dict = field(repr=False)
    context_counts: dict = field(repr=False)

    def _context(self, history: tuple[str, ...]) -> tuple[str, ...]:
        return tuple(s if s == BOS or s in self.vocab else UNK for s in history)

    def prob(self, context, symbol: str) -> float:
        """Smoothed P(symbol | context); ``context`` has ``order - 1`` symbols."""
        context = self._context(tuple(context))
        if symbol not in self.vocab:
            symbol = UNK
        num = self.gram_counts.get(context + (symbol,), 0) + self.alpha
        den = self.context_counts.get(context, 0) + self.alpha * (len(self.vocab) + 1)
        return num / den

    def outcomes(self) -> list[str]:
        """Every symbol a context can be followed by, UNK included."""
        return sorted(self.vocab) + [UNK]

    def events(self, ipa):
        """Yield (context, symbol) pairs scored for one word, end marker included."""
        padded = (BOS,) * (self.order - 1) + _symbols(ipa) + (EOS,)
        for i in range(self.order - 1, len(padded)):
            yield padded[i - self.order + 1 : i], padded[i]

    def to_json(self) -> dict:
        return {
            "format": LM_FORMAT,
            "version": LM_VERSION,
            "order": self.order,
            "alpha": self.alpha,
            "vocab": sorted(self.vocab),
            "gram_counts": [[list(k), v] for k, v in sorted(self.gram_counts.items())],
            "context_counts": [
                [list(k), v] for k, v in sorted(self.context_counts.items())
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CharNgramLM":
        if doc.get("format") != LM_FORMAT:
            raise FormatError(f"not a language-model document: {doc.get('format')!r}")
        if doc.get("version") != LM_VERSION:
            raise FormatError(f"unsupported language-model version {doc.get('version')!r}")
        try:
            return cls(
                order=int(doc["order"]),
                alpha=float(doc["alpha"]),
                vocab=frozenset(doc["vocab"]),
                gram_counts={tuple(k): int(v) for k, v in doc["gram_counts"]},
                context_counts={tuple(k): int(v) for k, v in doc["context_counts"]},
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"corrupt language-model document: {exc}") from exc


def train_lm(corpus, order: int = 3, alpha: float = 0.1) -> CharNgramLM:
    """Count padded n-grams over a corpus of IPA words."""
    corpus = list(corpus)
    if not corpus:
        raise ValidationError("cannot train a language model on an empty corpus")
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if not alpha > 0 or not math.isfinite(alpha):
        raise ValidationError(f"alpha must be a positive finite number, got {alpha}")

    grams: Counter = Counter()
    vocab = {EOS}
    for word in corpus:
        symbols = _symbols(word)
        vocab.update(symbols)
        padded = (BOS,) * (order - 1) + symbols + (EOS,)
        for i in range(order - 1, len(padded)):
            grams[padded[i - order + 1 : i + 1]] += 1
    contexts: Counter = Counter()
    for gram, count in grams.items():
        contexts[gram[:-1]] += count
    return CharNgramLM(order, float(alpha), frozenset(vocab), dict(grams), dict(contexts))


def surprisal(lm: CharNgramLM, ipa) -> float:
    """Total surprisal of a word in bits, including its end marker."""
    return -sum(math.log2(lm.prob(ctx, s)) for ctx, s in lm.events(ipa))


def phonotactic_complexity(lm: CharNgramLM, ipa) -> float:
    """Surprisal per phoneme (bits); 0 for the empty word."""
    n = len(_symbols(ipa))
    if n == 0:
        return 0.0
    return surprisal(lm, ipa) / n


def entropy(ipa) -> float:
    """Shannon entropy (bits) of the word's own phoneme distribution."""
    symbols = _symbols(ipa)
    n = len(symbols)
    if n == 0:
        return 0.0
    h = 0.0
    for count in Counter(symbols).values():
        p = count / n
        h -= p * math.log2(p)
    return h + 0.0


def save_lm(lm: CharNgramLM, path) -> None:
    from .corpus import atomic_write_text

    atomic_write_text(path, json.dumps(lm.to_json(), ensure_ascii=False, indent=1) + "\n")


def load_lm(path) -> CharNgramLM:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}", path) from exc
    return CharNgramLM.from_json(doc)

"""Slow, independent reference computations.

Nothing here imports from gazelab: each function recomputes a quantity
from its definition by brute force so tests can compare the two paths.
"""

import math
import unicodedata
from fractions import Fraction

START = "<s>"
END = "</s>"
UNKNOWN = "<unk>"


def transcribe(word, rules):
    """Longest-match rewriting by scanning every rule at every position.

    ``rules`` is a list of (source, [phonemes]). Returns (phonemes, unmapped).
    Unmapped characters are copied one code point at a time, which matches
    grapheme clusters for the plain-letter inputs used in tests.
    """
    out = []
    unmapped = False
    i = 0
    while i < len(word):
        best = None
        for source, target in rules:
            if word[i:i + len(source)] == source:
                if best is None or len(source) > len(best[0]):
                    best = (source, target)
        if best is None:
            out.append(word[i])
            unmapped = True
            i += 1
        else:
            out.extend(best[1])
            i += len(best[0])
    return out, unmapped


def windows(symbols, n):
    grams = []
    for start in range(len(symbols)):
        if start + n <= len(symbols):
            grams.append(tuple(symbols[start + j] for j in range(n)))
    return grams


def ngram_triple(symbols, n, length):
    grams = windows(symbols, n)
    unique = len(set(grams))
    norm = unique / length if length else 0.0
    return unique, len(grams), norm


def entropy(symbols):
    n = len(symbols)
    h = 0.0
    for sym in sorted(set(symbols)):
        p = Fraction(symbols.count(sym), n)
        h -= float(p) * math.log2(float(p))
    return abs(h)


def length_features(word, symbols, vowels):
    count = 0
    for s in symbols:
        if s in vowels:
            count += 1
    return len(word), len(symbols), count, (count / len(symbols) if symbols else 0.0)


def _padded(word, order):
    return [START] * (order - 1) + list(word) + [END]


def lm_prob(corpus, order, alpha, context, symbol):
    """Add-alpha conditional probability by rescanning the whole corpus."""
    vocab = {END}
    for word in corpus:
        vocab.update(word)
    context = [c if c == START or c in vocab else UNKNOWN for c in context]
    if symbol not in vocab:
        symbol = UNKNOWN
    gram = context + [symbol]
    gram_count = 0
    context_count = 0
    for word in corpus:
        seq = _padded(word, order)
        for i in range(order - 1, len(seq)):
            window = seq[i - order + 1:i + 1]
            if window == gram:
                gram_count += 1
            if window[:-1] == context:
                context_count += 1
    return (gram_count + alpha) / (context_count + alpha * (len(vocab) + 1))


def surprisal(corpus, order, alpha, word):
    seq = _padded(word, order)
    bits = 0.0
    for i in range(order - 1, len(seq)):
        bits -= math.log2(lm_prob(corpus, order, alpha, seq[i - order + 1:i], seq[i]))
    return bits


def pearson(xs, ys):
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


def sample_std(values):
    n = len(values)
    m = sum(values) / n
    return math.sqrt(sum((v - m) ** 2 for v in values) / (n - 1))


TIE = "͡"


def split_ipa(text):
    """Phonemes of a target string: whitespace splits explicitly; otherwise
    diacritics, length marks and tie-barred pairs stick to their base."""
    if " " in text:
        return text.split()
    out = []
    glue = False
    for ch in text:
        attach = (unicodedata.combining(ch) or unicodedata.category(ch) == "Lm") and ch not in "ˈˌ"
        if out and (attach or glue or ch == TIE):
            out[-1] += ch
        else:
            out.append(ch)
        glue = ch == TIE
    return out


def parse_map(text):
    """(rules, vowels) from a mapping file body."""
    rules, vowels = [], set()
    in_vowels = False
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if line.strip() == "[vowels]":
            in_vowels = True
        elif in_vowels:
            vowels.add(line.strip())
        else:
            source, target = line.split("\t")
            rules.append((source, split_ipa(target)))
    return rules, vowels


def is_vowel(phoneme, vowels):
    base = "".join(c for c in phoneme
                   if not unicodedata.combining(c) and unicodedata.category(c) != "Lm")
    return phoneme in vowels or base in vowels


def plain_word(raw):
    return unicodedata.normalize("NFC", raw).strip().strip(".,;:!?\"'()").lower()

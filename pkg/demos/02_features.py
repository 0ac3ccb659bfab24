"""
From a word to fourteen features
================================

Each token gets length counts, phoneme n-gram statistics, lexicon ratings,
a phonotactic complexity score from a character language model, and the
entropy of its phoneme distribution.
"""

from pathlib import Path

from gazelab.features import FEATURE_NAMES, extract
from gazelab.g2p import load_mapping, transcribe
from gazelab.lexicons import load_lexicon
from gazelab.lm import surprisal, train_lm

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
table = load_mapping(FIXTURES / "mappings" / "en.map")
lexicon = load_lexicon(FIXTURES / "lexicons" / "en.tsv")

# Train the language model on the transcribed vocabulary.
words = "the quick brown fox jumps over the lazy dog she sells sea shells".split()
lm = train_lm([transcribe(w, table) for w in words], order=3, alpha=0.1)

# Familiar shapes cost fewer bits than unusual ones.
for w in ["the", "shells", "xylophones"]:
    print(f"{w:12s} {surprisal(lm, transcribe(w, table)):7.2f} bits")

# The full feature vector. "zebra" is not in the lexicon, so it gets the
# lexicon means and the was_oov flag.
for w in ["shells", "zebra"]:
    fv = extract(w, transcribe(w, table), table, lm, lexicon)
    print(f"\n{w} (oov={fv.was_oov})")
    for name in FEATURE_NAMES:
        print(f"  {name:14s} {getattr(fv, name):.4f}")

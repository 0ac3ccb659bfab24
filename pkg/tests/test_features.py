import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gazelab.features import (
    FEATURE_NAMES,
    extract,
    length_features,
    ngram_features,
    ngram_profile,
)
from gazelab.g2p import IpaString, MappingTable, transcribe
from gazelab.lexicons import Lexicon
from gazelab.lm import train_lm

ALPHABET = ["a", "b", "c", "d", "e"]


class TestLengthFeatures:
    def test_cat(self, cat_table):
        got = length_features("cat", IpaString(("k", "æ", "t")), cat_table)
        assert got[:3] == (3, 3, 1)
        assert got[3] == pytest.approx(1 / 3)

    def test_empty(self, cat_table):
        assert length_features("", IpaString(), cat_table) == (0, 0, 0, 0)

    def test_all_vowels(self):
        t = MappingTable("x", (), ("a",))
        assert length_features("aaa", IpaString(("a",) * 3), t) == (3, 3, 3, 1.0)


class TestNgrams:
    def test_abab(self):
        prof = ngram_profile(("a", "b", "a", "b"), 2)
        assert dict(prof.grams) == {("a", "b"): 2, ("b", "a"): 1}
        assert (prof.total, prof.unique) == (3, 2)
        assert ngram_features(prof, 4) == (2, 3, 0.5)

    def test_short_word(self):
        prof = ngram_profile(("a",), 2)
        assert prof.total == 0
        assert ngram_features(prof, 1) == (0, 0, 0)

    def test_single_window(self):
        prof = ngram_profile(("a", "a", "a"), 3)
        assert dict(prof.grams) == {("a", "a", "a"): 1}
        count, total, norm = ngram_features(prof, 3)
        assert (count, total) == (1, 1)
        assert norm == pytest.approx(1 / 3)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            ngram_profile(("a",), 4)

    def test_order_matters(self):
        assert ngram_profile(("a", "b", "c"), 2).grams != ngram_profile(("c", "b", "a"), 2).grams

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.sampled_from(ALPHABET), max_size=10), st.sampled_from([2, 3]))
    def test_profile_invariants(self, word, n):
        prof = ngram_profile(word, n)
        assert prof.total == max(len(word) - n + 1, 0)
        assert all(len(g) == n for g in prof.grams)
        assert prof.unique <= prof.total

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.sampled_from(ALPHABET), min_size=1, max_size=6),
           st.integers(1, 5), st.sampled_from([2, 3]))
    def test_repetition_scales_sum(self, word, k, n):
        total = ngram_profile(word * k, n).total
        assert total == max(k * len(word) - n + 1, 0)
        assert total == len(oracles.windows(word * k, n))

    def test_length_features_order_invariant(self):
        t = MappingTable("x", (), ("a", "e"))
        w = ("a", "b", "e", "c")
        assert length_features("abec", IpaString(w), t) == length_features(
            "ceba", IpaString(w[::-1]), t
        )


@pytest.fixture
def cat_resources(cat_table):
    lm = train_lm([("k", "æ", "t"), ("t", "æ", "k"), ("æ", "t")], order=3, alpha=0.1)
    lex = Lexicon.from_entries("toy", {"cat": (5.5, 6.0), "dog": (6.0, 6.0)})
    return cat_table, lm, lex


class TestExtract:
    def test_cat_oracle_sheet(self, cat_resources):
        table, lm, lex = cat_resources
        fv = extract("cat", transcribe("cat", table), table, lm, lex)
        # oracle sheet: tests/oracles.py on the same fixture, frozen
        expected = {
            "word_len": 3, "ipa_len": 3, "ipa_count": 1, "ipa_norm": 1 / 3,
            "bigram_count": 2, "trigram_count": 1, "bigram_sum": 2, "trigram_sum": 1,
            "bigram_norm": 2 / 3, "trigram_norm": 1 / 3,
            "imageability": 5.5, "concreteness": 6.0,
            "phonetic_comp": 0.9387693730820253, "ipa_ent": 1.584962500721156,
        }
        for name in FEATURE_NAMES:
            assert getattr(fv, name) == pytest.approx(expected[name], abs=1e-9), name
        assert fv.ffd_hat is None
        assert not fv.was_oov
        assert len(fv.as_row()) == 14

    def test_oov_uses_means(self, cat_resources):
        table, lm, lex = cat_resources
        fv = extract("act", transcribe("act", table), table, lm, lex)
        assert (fv.imageability, fv.concreteness) == (5.75, 6.0)
        assert fv.was_oov

    def test_empty_word(self, cat_resources):
        table, lm, lex = cat_resources
        fv = extract("", IpaString(), table, lm, lex)
        row = fv.as_row()
        assert all(math.isfinite(v) for v in row)
        for name in ("ipa_norm", "bigram_norm", "trigram_norm", "phonetic_comp", "ipa_ent"):
            assert getattr(fv, name) == 0

    def test_unmapped_word_is_finite(self, cat_resources):
        table, lm, lex = cat_resources
        ipa = transcribe("zzqç", table)
        assert ipa.had_unmapped
        assert all(math.isfinite(v) for v in extract("zzqç", ipa, table, lm, lex).as_row())

    def test_norm_base_ortho(self, cat_resources):
        table, lm, lex = cat_resources
        ipa = IpaString(("k", "æ"))
        fv = extract("cat", ipa, table, lm, lex, norm_base="ortho")
        assert fv.bigram_norm == pytest.approx(1 / 3)
        with pytest.raises(ValueError):
            extract("cat", ipa, table, lm, lex, norm_base="syllable")

    def test_invariants_on_random_words(self, cat_resources):
        table, lm, lex = cat_resources
        rng = np.random.default_rng(0)
        for _ in range(200):
            word = "".join(rng.choice(list("catxyz"), size=rng.integers(0, 9)))
            fv = extract(word, transcribe(word, table), table, lm, lex)
            assert fv.bigram_count <= fv.bigram_sum
            assert fv.trigram_count <= fv.trigram_sum
            assert fv.ipa_count <= fv.ipa_len
            assert min(fv.ipa_norm, fv.bigram_norm, fv.trigram_norm) >= 0


def test_thousand_random_strings_match_bruteforce():
    rng = np.random.default_rng(11)
    vowels = {"a", "e"}
    table = MappingTable("x", (), tuple(vowels))
    start = time.perf_counter()
    for _ in range(1000):
        word = tuple(rng.choice(ALPHABET, size=rng.integers(0, 11)))
        ipa = IpaString(word)
        assert length_features("".join(word), ipa, table) == pytest.approx(
            oracles.length_features("".join(word), word, vowels), abs=1e-9
        )
        for n in (2, 3):
            assert ngram_features(ngram_profile(ipa, n), len(word)) == pytest.approx(
                oracles.ngram_triple(word, n, len(word)), abs=1e-9
            )
    assert time.perf_counter() - start < 10

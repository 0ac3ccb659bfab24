import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gazelab.errors import FormatError, ValidationError
from gazelab.g2p import IpaString
from gazelab.lm import (
    BOS,
    EOS,
    CharNgramLM,
    entropy,
    load_lm,
    phonotactic_complexity,
    save_lm,
    surprisal,
    train_lm,
)

AB_CORPUS = [("a", "b")] * 100


class TestTrain:
    def test_bigram_counts_with_boundaries(self):
        lm = train_lm([("a", "b"), ("a", "b")], order=2)
        assert lm.gram_counts == {(BOS, "a"): 2, ("a", "b"): 2, ("b", EOS): 2}
        assert lm.vocab == {"a", "b", EOS}

    def test_counts_match_bruteforce_tally(self):
        corpus = [tuple("abca"), tuple("bb"), tuple("c"), ()]
        lm = train_lm(corpus, order=3)
        for gram, count in lm.gram_counts.items():
            tally = 0
            for word in corpus:
                seq = [BOS] * 2 + list(word) + [EOS]
                tally += sum(tuple(seq[i:i + 3]) == gram for i in range(len(seq) - 2))
            assert tally == count

    def test_short_word_contributes_padded_grams(self):
        lm = train_lm([("a",)], order=3)
        assert lm.gram_counts == {(BOS, BOS, "a"): 1, (BOS, "a", EOS): 1}

    def test_context_counts_sum_continuations(self):
        lm = train_lm([tuple("abcab"), tuple("ba"), tuple("aab")], order=3)
        for ctx, total in lm.context_counts.items():
            assert total == sum(c for g, c in lm.gram_counts.items() if g[:-1] == ctx)

    @pytest.mark.parametrize("alpha", [0, -1, float("nan")])
    def test_bad_alpha(self, alpha):
        with pytest.raises(ValidationError):
            train_lm([("a",)], alpha=alpha)

    def test_empty_corpus(self):
        with pytest.raises(ValidationError):
            train_lm([])

    def test_order_one(self):
        lm = train_lm([("a", "b")], order=1, alpha=1.0)
        assert lm.prob((), "a") == pytest.approx(2 / (3 + 4))


class TestSurprisal:
    def test_frozen_oracle_values(self):
        lm = train_lm(AB_CORPUS, order=3, alpha=0.01)
        # values from oracles.surprisal (brute-force corpus rescans)
        assert surprisal(lm, ("a", "b")) == pytest.approx(0.0012981010212783487, abs=1e-6)
        assert surprisal(lm, ("b", "a")) == pytest.approx(17.28828934218097, abs=1e-6)
        assert surprisal(lm, ("b", "a")) > surprisal(lm, ("a", "b"))

    def test_live_oracle(self):
        corpus = [tuple("kæt"), tuple("tæk"), tuple("æt"), tuple("kæ")]
        lm = train_lm(corpus, order=3, alpha=0.1)
        for word in [tuple("kæt"), tuple("tt"), tuple("zæ"), ()]:
            expected = oracles.surprisal([list(w) for w in corpus], 3, 0.1, list(word))
            assert surprisal(lm, word) == pytest.approx(expected, abs=1e-12)

    def test_empty_word_is_end_boundary_only(self):
        lm = train_lm(AB_CORPUS, order=3, alpha=0.01)
        p_end = lm.prob((BOS, BOS), EOS)
        assert surprisal(lm, ()) == pytest.approx(-math.log2(p_end))
        assert surprisal(lm, ()) == pytest.approx(13.28828934218097, abs=1e-9)

    def test_unseen_symbols_finite(self):
        lm = train_lm(AB_CORPUS, order=3, alpha=0.01)
        assert math.isfinite(surprisal(lm, ("x", "y", "z")))

    def test_accepts_ipa_string(self):
        lm = train_lm(AB_CORPUS, order=3, alpha=0.01)
        assert surprisal(lm, IpaString(("a", "b"))) == surprisal(lm, ("a", "b"))


class TestPhonotacticComplexity:
    def test_ratio(self):
        lm = train_lm([tuple("abcab"), tuple("ba")], alpha=0.1)
        for word in [tuple("ab"), tuple("abc"), tuple("cccc")]:
            assert phonotactic_complexity(lm, word) == surprisal(lm, word) / len(word)

    def test_empty_is_zero(self):
        lm = train_lm(AB_CORPUS)
        assert phonotactic_complexity(lm, ()) == 0.0

    def test_fixture_value(self):
        lm = train_lm(AB_CORPUS, order=3, alpha=0.01)
        assert phonotactic_complexity(lm, ("a", "b")) == pytest.approx(
            0.0006490505106391744, abs=1e-9
        )

    def test_equal_surprisal_ratio(self):
        # unigram model with P(a) = 1/2, P(x) = 1/4, P(end) = 1/8: "xx" and
        # "aaaa" both cost 7 bits
        lm = CharNgramLM(1, 1.0, frozenset({"a", "x", EOS}), {("a",): 3, ("x",): 1}, {(): 4})
        assert surprisal(lm, ("x", "x")) == pytest.approx(7.0)
        assert surprisal(lm, ("a",) * 4) == pytest.approx(7.0)
        ratio = phonotactic_complexity(lm, ("x", "x")) / phonotactic_complexity(lm, ("a",) * 4)
        assert ratio == pytest.approx(2.0)


class TestNormalization:
    def test_every_context_sums_to_one(self):
        corpus = [tuple("kætɪs"), tuple("tæk"), tuple("æt"), tuple("ʃiːp"), ()]
        lm = train_lm(corpus, order=3, alpha=0.1)
        contexts = set(lm.context_counts) | {("zz", "q")}
        for ctx in contexts:
            probs = [lm.prob(ctx, s) for s in lm.outcomes()]
            assert math.fsum(probs) == pytest.approx(1.0, abs=1e-9)
            assert min(probs) > 0

    def test_alpha_moves_toward_uniform(self):
        corpus = [tuple("aab"), tuple("aba"), tuple("a")]
        alphas = [0.01, 0.1, 1.0, 10.0, 100.0]
        lms = [train_lm(corpus, order=2, alpha=a) for a in alphas]
        uniform = 1 / (len(lms[0].vocab) + 1)
        for ctx in lms[0].context_counts:
            for s in lms[0].outcomes():
                gaps = [abs(lm.prob(ctx, s) - uniform) for lm in lms]
                assert all(a >= b for a, b in zip(gaps, gaps[1:]))

    def test_likelier_words_have_lower_surprisal(self):
        import numpy as np

        rng = np.random.default_rng(3)
        words = [("a", "b"), ("b", "a"), ("a", "a"), ("b", "b")]
        probs = [0.55, 0.25, 0.15, 0.05]
        corpus = [words[i] for i in rng.choice(4, size=4000, p=probs)]
        lm = train_lm(corpus, order=3, alpha=0.1)
        s = [surprisal(lm, w) for w in words]
        assert s == sorted(s)


class TestEntropy:
    def test_constant(self):
        assert entropy(("a",) * 4) == 0.0

    def test_two_symbols(self):
        assert entropy(("a", "b")) == 1.0

    def test_frozen(self):
        assert entropy(("a", "a", "b")) == pytest.approx(0.918296, abs=1e-6)
        assert entropy(("a", "a", "b")) == pytest.approx(
            -(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3), abs=1e-12
        )

    def test_empty(self):
        assert entropy(()) == 0.0

    @settings(max_examples=300, deadline=None)
    @given(st.lists(st.sampled_from("abcde"), max_size=12))
    def test_bounds_and_oracle(self, word):
        h = entropy(word)
        assert h == pytest.approx(oracles.entropy(word), abs=1e-12) if word else h == 0
        assert 0 <= h <= (math.log2(len(word)) if word else 0) + 1e-12

    @pytest.mark.parametrize("k", [1, 2, 3, 5, 8, 13])
    def test_uniform_distinct_reaches_log_length(self, k):
        word = tuple(chr(0x61 + i) for i in range(k))
        assert entropy(word) == pytest.approx(math.log2(k), abs=1e-12)


class TestSerialization:
    def test_round_trip_bit_identical(self, tmp_path):
        corpus = [tuple("kætɪs"), tuple("tæk"), tuple("æt"), tuple("ʃiːp")]
        lm = train_lm(corpus, order=3, alpha=0.1)
        path = tmp_path / "lm.json"
        save_lm(lm, path)
        again = load_lm(path)
        assert again == lm
        for w in corpus + [tuple("zz"), ()]:
            assert surprisal(again, w) == surprisal(lm, w)

    def test_version_checked(self, tmp_path):
        lm = train_lm([("a",)])
        doc = lm.to_json()
        doc["version"] = 99
        path = tmp_path / "lm.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(FormatError, match="version"):
            load_lm(path)

    def test_corrupt(self, tmp_path):
        path = tmp_path / "lm.json"
        path.write_text("{not json")
        with pytest.raises(FormatError):
            load_lm(path)

"""Regenerate the 60-token two-language fixture corpus.

Labels are synthetic: first-fixation time grows with word length, total
reading time with first-fixation time and length, plus seeded noise.

    python fixtures/make_corpus.py
"""

from pathlib import Path

import numpy as np

HERE = Path(__file__).parent

TRAIN = {
    "en": [
        "The quick brown fox jumps over the lazy dog.",
        "She sells sea shells by the shore.",
        "Good things take time.",
    ],
    "de": [
        "Der schnelle braune Fuchs springt über den faulen Hund.",
        "Ich weiß nicht, was soll es bedeuten.",
        "Die Kinder spielen draußen.",
    ],
}
TEST = {
    "en": ["Watch the children sing a song.", "Xylophones are quite loud."],
    "de": ["Heute scheint die Sonne.", "Meine Katze schläft auf dem Sofa."],
}
HEADER = ["language", "sentence_id", "word_id", "word"]
LABELS = ["FFDAvg", "FFDStd", "TRTAvg", "TRTStd"]


def rows(sentences):
    for language, texts in sentences.items():
        for s, text in enumerate(texts):
            for w, word in enumerate(text.split()):
                yield language, s, w, word


def main():
    rng = np.random.default_rng(2022)
    lines = ["\t".join(HEADER + LABELS)]
    for language, s, w, word in rows(TRAIN):
        n = len(word.strip(".,"))
        ffd = 160 + 5 * n + rng.normal(0, 8)
        trt = 1.25 * ffd + 12 * n + rng.normal(0, 15)
        ffd_sd = 20 + abs(rng.normal(0, 5))
        trt_sd = 40 + abs(rng.normal(0, 10))
        vals = [f"{v:.2f}" for v in (ffd, ffd_sd, trt, trt_sd)]
        lines.append("\t".join([language, str(s), str(w), word] + vals))
    (HERE / "corpus" / "train.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = ["\t".join(HEADER)]
    for language, s, w, word in rows(TEST):
        lines.append("\t".join([language, str(s), str(w), word]))
    (HERE / "corpus" / "test.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()

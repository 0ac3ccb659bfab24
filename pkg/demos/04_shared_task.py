"""
A full shared-task run
======================

Transcribe, featurize, train the first-fixation model, feed its predictions
to the total-reading-time model, and estimate each target's spread from four
model families. The equivalent command line is::

    gazelab submit --train fixtures/corpus/train.tsv --test fixtures/corpus/test.tsv \\
        --mapping-dir fixtures/mappings --lexicon-dir fixtures/lexicons -o submission.tsv
"""

from pathlib import Path

from gazelab.pipeline import RunConfig, run_shared_task

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

cfg = RunConfig(
    train=str(FIXTURES / "corpus" / "train.tsv"),
    test=str(FIXTURES / "corpus" / "test.tsv"),
    mapping_dir=str(FIXTURES / "mappings"),
    lexicon_dir=str(FIXTURES / "lexicons"),
    seed=0,
)
submission = run_shared_task(cfg)
print(submission.to_tsv())

# Turning the cascade off drops the extra column from the second model.
plain = run_shared_task(RunConfig(**{**cfg.__dict__, "cascade": False}))
diff = abs(plain.trt_avg - submission.trt_avg).mean()
print(f"mean change in TRTAvg without the cascade: {diff:.2f} ms")

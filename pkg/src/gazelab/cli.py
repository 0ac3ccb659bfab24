"""Command-line interface.

    gazelab transcribe  corpus.tsv --mapping-dir maps/ -o corpus.ipa.tsv
    gazelab extract     corpus.ipa.tsv --mapping-dir maps/ --lexicon-dir lex/ -o feats.tsv
    gazelab train       feats.tsv --target FFDAvg --model '{"family": "rf"}' -o rf.json
    gazelab predict     rf.json feats.tsv -o pred.tsv
    gazelab evaluate    feats.tsv --target FFDAvg [--config grid.json]
    gazelab importance  feats.tsv --target TRTAvg --include FFDAvg
    gazelab submit      --train train.tsv --test test.tsv --mapping-dir maps/ -o sub.tsv

Exit codes: 0 success, 1 validation, 2 I/O, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .corpus import ID_COLUMNS, atomic_write_text, format_float, read_table, read_tokens, render_tsv
from .errors import GazelabError, ValidationError
from .evaluation import (
    cross_validate,
    feature_importance,
    format_importance,
    format_report_table,
    kfold,
    reports_json,
)
from .lm import load_lm, save_lm, train_lm
from .models import ModelConfig, load_model_file, predict, save_model_file, train
from .pipeline import (
    RunConfig,
    extract_features,
    feature_dataset,
    feature_tsv,
    load_config,
    load_lexicons,
    load_mappings,
    log_header,
    run_shared_task,
    transcribe_tokens,
    transcription_tsv,
)

log = logging.getLogger("gazelab")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="JSON run config (default: $GAZELAB_CONFIG)")
    p.add_argument("--seed", type=int, help="top-level seed; overrides the config")
    p.add_argument("-q", "--quiet", action="store_true", help="only log warnings")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gazelab", description="Reading-time prediction in IPA space.")
    parser.add_argument("--version", action="version", version=f"gazelab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("transcribe", help="append an ipa column to a corpus file")
    _common(p)
    p.add_argument("input")
    p.add_argument("--mapping-dir")
    p.add_argument("--allow-passthrough", action="store_true", default=None)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("extract", help="compute the feature matrix")
    _common(p)
    p.add_argument("input", help="corpus file with an ipa column")
    p.add_argument("--mapping-dir")
    p.add_argument("--lexicon-dir")
    lm = p.add_mutually_exclusive_group()
    lm.add_argument("--lm", help="trained language model JSON")
    lm.add_argument("--lm-corpus", help="file with ipa column to train the LM on "
                    "(default: the input itself)")
    p.add_argument("--save-lm")
    p.add_argument("--norm-base", choices=("ipa", "ortho"))
    p.add_argument("--allow-passthrough", action="store_true", default=None)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("train", help="fit one model on a feature matrix")
    _common(p)
    p.add_argument("features")
    p.add_argument("--target", required=True)
    p.add_argument("--model", required=True, help="model config as JSON text or a file path")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("predict", help="apply a trained model")
    _common(p)
    p.add_argument("model")
    p.add_argument("features")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("evaluate", help="k-fold cross-validation over a model grid")
    _common(p)
    p.add_argument("features")
    p.add_argument("--target", required=True)
    p.add_argument("--model", action="append", default=[],
                   help="model config JSON (repeatable); replaces the config grid")
    p.add_argument("--folds", type=int)
    p.add_argument("--json", dest="json_out", help="write the machine-readable report here")

    p = sub.add_parser("importance", help="Pearson correlation of each feature with a target")
    _common(p)
    p.add_argument("features")
    p.add_argument("--target", required=True)
    p.add_argument("--include", action="append", default=[],
                   help="also rank this label column as a predictor (repeatable)")
    p.add_argument("--top", type=int, default=7)
    p.add_argument("--json", dest="json_out")

    p = sub.add_parser("submit", help="full pipeline: train, predict, write a submission")
    _common(p)
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--mapping-dir")
    p.add_argument("--lexicon-dir")
    p.add_argument("--norm-base", choices=("ipa", "ortho"))
    p.add_argument("--std-mode", choices=("sample", "population"))
    p.add_argument("--no-cascade", dest="cascade", action="store_false", default=None)
    p.add_argument("--cascade-insample", action="store_true", default=None)
    p.add_argument("--allow-passthrough", action="store_true", default=None)
    p.add_argument("--features-dir", help="also write the train/test feature matrices here")
    p.add_argument("-o", "--output", required=True)
    return parser


def _run_config(args) -> RunConfig:
    doc = load_config(args.config)
    overrides = {
        "train": getattr(args, "train", None),
        "test": getattr(args, "test", None),
        "mapping_dir": getattr(args, "mapping_dir", None),
        "lexicon_dir": getattr(args, "lexicon_dir", None),
        "norm_base": getattr(args, "norm_base", None),
        "std_mode": getattr(args, "std_mode", None),
        "cascade": getattr(args, "cascade", None),
        "cascade_insample": getattr(args, "cascade_insample", None),
        "allow_passthrough": getattr(args, "allow_passthrough", None),
    }
    doc.update({k: v for k, v in overrides.items() if v is not None})
    cfg = RunConfig.from_dict(doc)
    if args.seed is not None:
        if args.seed < 0:
            raise ValidationError("--seed must be nonnegative")
        cfg = cfg.with_seed(args.seed)
    return cfg


def _model_config(text: str, seed: int) -> ModelConfig:
    path = Path(text)
    if not text.lstrip().startswith("{") and path.is_file():
        text = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"--model is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError("--model must be a JSON object")
    return ModelConfig.from_dict({"seed": seed, **doc})


def cmd_transcribe(args, cfg: RunConfig) -> None:
    if cfg.mapping_dir is None:
        raise ValidationError("--mapping-dir is required")
    header, rows = read_table(args.input)
    tokens = read_tokens(args.input)
    tables = load_mappings(cfg.mapping_dir, tokens, cfg.allow_passthrough)
    tokens = transcribe_tokens(tokens, tables)
    atomic_write_text(args.output, transcription_tsv(header, rows, tokens))


def cmd_extract(args, cfg: RunConfig) -> None:
    if cfg.mapping_dir is None:
        raise ValidationError("--mapping-dir is required")
    tokens = read_tokens(args.input)
    if any(t.ipa is None for t in tokens):
        raise ValidationError(f"{args.input} has no ipa column; run transcribe first")
    tables = load_mappings(cfg.mapping_dir, tokens, cfg.allow_passthrough)
    if args.lm:
        lm = load_lm(args.lm)
    else:
        corpus = read_tokens(args.lm_corpus) if args.lm_corpus else tokens
        if any(t.ipa is None for t in corpus):
            raise ValidationError("the LM corpus has no ipa column")
        lm = train_lm([t.ipa for t in corpus], cfg.lm_order, cfg.lm_alpha)
    if args.save_lm:
        save_lm(lm, args.save_lm)
    lexicons = load_lexicons(cfg.lexicon_dir, [t.language for t in tokens])
    table = extract_features(tokens, tables, lm, lexicons, cfg.norm_base)
    atomic_write_text(args.output, feature_tsv(table))


def cmd_train(args, cfg: RunConfig) -> None:
    data = feature_dataset(args.features, args.target)
    model = train(data, _model_config(args.model, cfg.seed))
    save_model_file(model, args.output)


def cmd_predict(args, cfg: RunConfig) -> None:
    model = load_model_file(args.model)
    data = feature_dataset(args.features, None)
    y = predict(model, data)
    header, rows = read_table(args.features)
    out = [[row[c] for c in ID_COLUMNS] + [format_float(v, 4)] for row, v in zip(rows, y)]
    atomic_write_text(args.output, render_tsv(list(ID_COLUMNS) + ["prediction"], out))


def cmd_evaluate(args, cfg: RunConfig) -> None:
    grid = [_model_config(m, cfg.seed) for m in args.model] if args.model else list(cfg.grid)
    if not grid:
        raise ValidationError("the model grid is empty")
    data = feature_dataset(args.features, args.target)
    plan = kfold(len(data), args.folds or cfg.cv_folds, cfg.seed)
    reports = [cross_validate(data, m, plan) for m in grid]
    sys.stdout.write(format_report_table(reports, f"{plan.k}-fold CV, target {args.target}"))
    if args.json_out:
        atomic_write_text(args.json_out, reports_json(reports))


def cmd_importance(args, cfg: RunConfig) -> None:
    data = feature_dataset(args.features, args.target)
    for label in args.include:
        extra = feature_dataset(args.features, label)
        data = data.with_column(label, extra.y)
    rows = feature_importance(data)
    sys.stdout.write(format_importance(rows, args.top, f"Top predictors of {args.target}"))
    if args.json_out:
        doc = [{"feature": c.feature, "r": c.r, "zero_variance": c.zero_variance} for c in rows]
        atomic_write_text(args.json_out, json.dumps(doc, indent=1) + "\n")


def cmd_submit(args, cfg: RunConfig) -> None:
    submission = run_shared_task(cfg, features_dir=args.features_dir)
    atomic_write_text(args.output, submission.to_tsv())


COMMANDS = {
    "transcribe": cmd_transcribe,
    "extract": cmd_extract,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "importance": cmd_importance,
    "submit": cmd_submit,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _run_config(args)
        if args.command != "submit":
            log_header(args.command, cfg)
        COMMANDS[args.command](args, cfg)
    except GazelabError as exc:
        log.error("%s", exc)
        return exc.exit_code
    except OSError as exc:
        log.error("%s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

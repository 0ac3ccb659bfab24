"""End-to-end orchestration: corpus files in, feature matrices and a
shared-task submission out.

The procedure is the same whether or not the test languages occur in the
training data; a new language only needs a ``<language>.map`` file (and,
optionally, a ``<language>.tsv`` lexicon).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import platform
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .corpus import (
    ID_COLUMNS,
    LABEL_COLUMNS,
    Token,
    atomic_write_text,
    format_float,
    read_table,
    read_tokens,
    render_tsv,
)
from .errors import FormatError, ValidationError
from .evaluation import STD_MODES, cascade_train, ensemble_std
from .features import CASCADE_FEATURE, FEATURE_NAMES, NORM_BASES, extract
from .g2p import IpaString, MappingTable, default_vowels, load_mapping, normalize_word, transcribe
from .lexicons import Lexicon, load_lexicon
from .lm import CharNgramLM, train_lm
from .models import Dataset, ModelConfig, best_ffd_configs, best_trt_configs, default_grid, train

log = logging.getLogger(__name__)

CONFIG_ENV = "GAZELAB_CONFIG"
MAPPING_SUFFIX = ".map"
LEXICON_SUFFIX = ".tsv"
SUBMISSION_COLUMNS = ID_COLUMNS + ("FFDAvg", "FFDStd", "TRTAvg", "TRTStd")


class UnknownLanguageError(ValidationError):
    """Rows whose language has no mapping file."""

    def __init__(self, missing: dict):
        self.missing = missing
        lines = [f"no mapping file for {len(missing)} language(s):"]
        for language, rows in sorted(missing.items()):
            shown = ", ".join(f"{s}/{w}" for s, w in rows[:5])
            more = f" (+{len(rows) - 5} more)" if len(rows) > 5 else ""
            lines.append(f"  {language}: {len(rows)} row(s), sentence/word {shown}{more}")
        super().__init__("\n".join(lines))


@dataclass(frozen=True)
class RunConfig:
    train: str | None = None
    test: str | None = None
    mapping_dir: str | None = None
    lexicon_dir: str | None = None
    output_dir: str | None = None
    lm_order: int = 3
    lm_alpha: float = 0.1
    ffd_models: tuple = field(default_factory=lambda: tuple(best_ffd_configs()))
    trt_models: tuple = field(default_factory=lambda: tuple(best_trt_configs()))
    grid: tuple = field(default_factory=lambda: tuple(default_grid()))
    cascade: bool = True
    cascade_insample: bool = False
    cascade_folds: int = 10
    cv_folds: int = 10
    norm_base: str = "ipa"
    std_mode: str = "sample"
    allow_passthrough: bool = False
    seed: int = 0

    def validate(self, need=("train", "test", "mapping_dir")) -> "RunConfig":
        for name in need:
            value = getattr(self, name)
            if value is None:
                raise ValidationError(f"config: {name} is required")
            if not Path(value).exists():
                raise ValidationError(f"config: {name} path does not exist: {value}")
        if self.lexicon_dir is not None and not Path(self.lexicon_dir).is_dir():
            raise ValidationError(f"config: lexicon_dir is not a directory: {self.lexicon_dir}")
        if self.norm_base not in NORM_BASES:
            raise ValidationError(f"config: norm_base must be one of {NORM_BASES}")
        if self.std_mode not in STD_MODES:
            raise ValidationError(f"config: std_mode must be one of {STD_MODES}")
        if self.lm_order < 1 or not (self.lm_alpha > 0 and math.isfinite(self.lm_alpha)):
            raise ValidationError("config: lm_order must be >= 1 and lm_alpha > 0")
        if len(self.ffd_models) != 4 or len(self.trt_models) != 4:
            raise ValidationError("config: ffd_models and trt_models need 4 entries each")
        if self.cascade_folds < 2 or self.cv_folds < 2:
            raise ValidationError("config: fold counts must be >= 2")
        return self

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        seed = d.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise ValidationError(f"config: seed must be a nonnegative integer, got {seed!r}")
        unknown = set(d) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ValidationError(f"config: unknown keys {sorted(unknown)}")
        for key in ("ffd_models", "trt_models", "grid"):
            if key in d:
                if not isinstance(d[key], list):
                    raise ValidationError(f"config: {key} must be a list")
                d[key] = tuple(
                    ModelConfig.from_dict({"seed": seed, **m}) for m in d[key]
                )
        cfg = cls(**d)
        return cfg.with_seed(seed, only_defaults=True, given=d)

    def with_seed(self, seed: int, only_defaults=False, given=None) -> "RunConfig":
        """Propagate ``seed`` into model configs (all, or only defaulted lists)."""
        given = given or {}
        changes = {"seed": seed}
        for key, factory in (("ffd_models", best_ffd_configs), ("trt_models", best_trt_configs),
                             ("grid", default_grid)):
            if only_defaults and key in given:
                continue
            if only_defaults:
                changes[key] = tuple(factory(seed))
            else:
                changes[key] = tuple(m.with_seed(seed) for m in getattr(self, key))
        return replace(self, **changes)

    def to_dict(self) -> dict:
        out = {}
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if name in ("ffd_models", "trt_models", "grid"):
                value = [m.to_dict() for m in value]
            out[name] = value
        return out

    def digest(self) -> str:
        """Hash of the settings that determine outputs (paths excluded)."""
        d = self.to_dict()
        for key in ("train", "test", "mapping_dir", "lexicon_dir", "output_dir"):
            d.pop(key)
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path=None) -> dict:
    """Read a JSON config file; falls back to $GAZELAB_CONFIG, then to {}."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON config: {exc}", path) from exc
    if not isinstance(doc, dict):
        raise FormatError("config must be a JSON object", path)
    return doc


def log_header(command: str, cfg: RunConfig) -> None:
    log.info("gazelab %s %s | seed=%d config=%s | python %s numpy %s",
             __version__, command, cfg.seed, cfg.digest(), platform.python_version(),
             np.__version__)


# --- resources ---------------------------------------------------------------

def passthrough_table(language: str) -> MappingTable:
    return MappingTable(language, (), default_vowels())


def load_mappings(mapping_dir, tokens, allow_passthrough=False) -> dict:
    """Load ``<language>.map`` for every language in ``tokens``."""
    mapping_dir = Path(mapping_dir)
    tables = {}
    missing: dict[str, list] = {}
    for tok in tokens:
        if tok.language in tables:
            continue
        path = mapping_dir / f"{tok.language}{MAPPING_SUFFIX}"
        if path.is_file():
            tables[tok.language] = load_mapping(path, tok.language)
        else:
            missing.setdefault(tok.language, [])
    if missing:
        for tok in tokens:
            if tok.language in missing:
                missing[tok.language].append((tok.sentence_id, tok.word_id))
        if not allow_passthrough:
            raise UnknownLanguageError(missing)
        for language in missing:
            log.warning("no mapping for %r; passing its characters through", language)
            tables[language] = passthrough_table(language)
    return tables


def load_lexicons(lexicon_dir, languages) -> dict:
    """Per-language lexicons; languages without a file share a constant
    lexicon holding the mean scores over all loaded entries."""
    found = {}
    if lexicon_dir is not None:
        for language in sorted(set(languages)):
            path = Path(lexicon_dir) / f"{language}{LEXICON_SUFFIX}"
            if path.is_file():
                found[language] = load_lexicon(path, language)
    pooled = [s for lex in found.values() for s in lex.entries.values()]
    if pooled:
        img = math.fsum(s[0] for s in pooled) / len(pooled)
        conc = math.fsum(s[1] for s in pooled) / len(pooled)
    else:
        img = conc = 0.0
    out = {}
    for language in sorted(set(languages)):
        if language in found:
            out[language] = found[language]
        else:
            log.warning("no lexicon for %r; using pooled mean scores", language)
            out[language] = Lexicon.constant(language, img, conc)
    return out


# --- stages -------------------------------------------------------------------

def transcribe_tokens(tokens, tables) -> list[Token]:
    out = []
    unmapped = 0
    for tok in tokens:
        ipa = transcribe(normalize_word(tok.word), tables[tok.language])
        unmapped += ipa.had_unmapped
        out.append(tok.with_ipa(ipa))
    if unmapped:
        log.info("%d of %d words contained unmapped characters", unmapped, len(tokens))
    return out


def train_corpus_lm(tokens, order=3, alpha=0.1) -> CharNgramLM:
    return train_lm([t.ipa for t in tokens], order, alpha)


@dataclass
class FeatureTable:
    tokens: list
    vectors: list
    oov_rate: float = 0.0

    def matrix(self, with_cascade=False) -> np.ndarray:
        if not self.vectors:
            width = len(FEATURE_NAMES) + int(with_cascade)
            return np.zeros((0, width))
        return np.array([v.as_row() for v in self.vectors], dtype=np.float64)

    def dataset(self, target: str | None = None) -> Dataset:
        """A 14-feature Dataset; ``target=None`` gives a zero placeholder target."""
        X = np.array([v.as_row()[: len(FEATURE_NAMES)] for v in self.vectors],
                     dtype=np.float64).reshape(len(self.vectors), len(FEATURE_NAMES))
        if target is None:
            y = np.zeros(len(self.tokens))
        else:
            missing = [t.row_id for t in self.tokens if target not in t.labels]
            if missing:
                raise ValidationError(
                    f"{len(missing)} row(s) lack {target}; first: {missing[0]}"
                )
            y = np.array([t.labels[target] for t in self.tokens])
        return Dataset(FEATURE_NAMES, X, y, tuple(t.row_id for t in self.tokens))


def extract_features(tokens, tables, lm, lexicons, norm_base="ipa") -> FeatureTable:
    vectors = []
    for tok in tokens:
        vectors.append(
            extract(normalize_word(tok.word), tok.ipa, tables[tok.language], lm,
                    lexicons[tok.language], norm_base)
        )
    oov = sum(v.was_oov for v in vectors)
    rate = oov / len(vectors) if vectors else 0.0
    log.info("lexicon OOV rate %.4f (%d of %d tokens)", rate, oov, len(vectors))
    return FeatureTable(list(tokens), vectors, rate)


# --- file formats -------------------------------------------------------------

def _ipa_cell(ipa: IpaString | None) -> str:
    return " ".join(ipa.phonemes) if ipa is not None else ""


def transcription_tsv(header, rows, tokens) -> str:
    """The raw input rows, unchanged, with an ``ipa`` column appended (or refreshed)."""
    cols = [c for c in header if c != "ipa"] + ["ipa"]
    out = []
    for row, tok in zip(rows, tokens):
        out.append([row[c] for c in cols[:-1]] + [_ipa_cell(tok.ipa)])
    return render_tsv(cols, out)


def feature_tsv(table: FeatureTable, ffd_hat=None) -> str:
    labels = [c for c in LABEL_COLUMNS if any(c in t.labels for t in table.tokens)]
    header = list(ID_COLUMNS) + ["ipa"] + list(FEATURE_NAMES)
    if ffd_hat is not None:
        header.append(CASCADE_FEATURE)
    header += labels
    rows = []
    for i, (tok, vec) in enumerate(zip(table.tokens, table.vectors)):
        row = [tok.language, tok.sentence_id, tok.word_id, tok.word, _ipa_cell(tok.ipa)]
        row += [format_float(v) if isinstance(v, float) else str(v)
                for v in (getattr(vec, n) for n in FEATURE_NAMES)]
        if ffd_hat is not None:
            row.append(format_float(ffd_hat[i]))
        row += [format_float(tok.labels[c]) if c in tok.labels else "" for c in labels]
        rows.append(row)
    return render_tsv(header, rows)


def read_feature_tsv(path):
    """Read a feature matrix file back into (tokens, names, X)."""
    header, rows = read_table(path)
    names = [c for c in header if c in FEATURE_NAMES or c == CASCADE_FEATURE]
    if tuple(names[: len(FEATURE_NAMES)]) != FEATURE_NAMES:
        raise FormatError(f"feature columns missing or out of order: {names}", path, 1)
    tokens = read_tokens(path)
    X = np.empty((len(rows), len(names)))
    for i, row in enumerate(rows):
        for j, name in enumerate(names):
            try:
                X[i, j] = float(row[name])
            except ValueError:
                raise FormatError(f"column {name}: not a number", path, i + 2) from None
    return tokens, tuple(names), X


def feature_dataset(path, target: str | None) -> Dataset:
    tokens, names, X = read_feature_tsv(path)
    if target is None:
        y = np.zeros(len(tokens))
    else:
        missing = [t.row_id for t in tokens if target not in t.labels]
        if missing:
            raise ValidationError(f"{len(missing)} row(s) lack {target}; first: {missing[0]}")
        y = np.array([t.labels[target] for t in tokens])
    return Dataset(names, X, y, tuple(t.row_id for t in tokens))


# --- shared-task run ----------------------------------------------------------

@dataclass
class Submission:
    tokens: list
    ffd_avg: np.ndarray
    ffd_std: np.ndarray
    trt_avg: np.ndarray
    trt_std: np.ndarray

    def to_tsv(self) -> str:
        rows = []
        for i, tok in enumerate(self.tokens):
            rows.append([tok.language, tok.sentence_id, tok.word_id, tok.word]
                        + [format_float(a[i], 4) for a in
                           (self.ffd_avg, self.ffd_std, self.trt_avg, self.trt_std)])
        return render_tsv(SUBMISSION_COLUMNS, rows)


@dataclass
class PreparedData:
    train: FeatureTable
    test: FeatureTable
    lm: CharNgramLM


def prepare(cfg: RunConfig) -> PreparedData:
    """Read, transcribe, and featurize the train and test files."""
    train_tokens = read_tokens(cfg.train)
    test_tokens = read_tokens(cfg.test)
    tables = load_mappings(cfg.mapping_dir, train_tokens + test_tokens, cfg.allow_passthrough)
    train_tokens = transcribe_tokens(train_tokens, tables)
    test_tokens = transcribe_tokens(test_tokens, tables)
    lm = train_corpus_lm(train_tokens, cfg.lm_order, cfg.lm_alpha)
    lexicons = load_lexicons(cfg.lexicon_dir, [t.language for t in train_tokens + test_tokens])
    return PreparedData(
        extract_features(train_tokens, tables, lm, lexicons, cfg.norm_base),
        extract_features(test_tokens, tables, lm, lexicons, cfg.norm_base),
        lm,
    )


def run_shared_task(cfg: RunConfig, features_dir=None) -> Submission:
    """Predict FFDAvg/FFDStd/TRTAvg/TRTStd for every test token.

    The first model of ``ffd_models`` / ``trt_models`` produces the averages;
    all four of each list produce the standard deviations.
    """
    cfg.validate()
    log_header("submit", cfg)
    data = prepare(cfg)
    train_ffd = data.train.dataset("FFDAvg")
    y_trt = data.train.dataset("TRTAvg").y
    test = data.test.dataset(None)

    cascade = cascade_train(train_ffd, y_trt, cfg.ffd_models[0], cfg.trt_models[0],
                            cascade=cfg.cascade, insample=cfg.cascade_insample,
                            k=cfg.cascade_folds, seed=cfg.seed)
    ffd_pred, trt_pred = cascade.predict(test)

    ffd_models = [cascade.model_ffd] + [train(train_ffd, c) for c in cfg.ffd_models[1:]]
    ffd_std = ensemble_std(ffd_models, test, cfg.std_mode)

    train_trt = train_ffd.with_target(y_trt)
    if cascade.enabled:
        train_trt = train_trt.with_column(CASCADE_FEATURE, cascade.ffd_hat)
    test_trt = cascade.trt_features(test, ffd_pred)
    trt_models = [cascade.model_trt] + [train(train_trt, c) for c in cfg.trt_models[1:]]
    trt_std = ensemble_std(trt_models, test_trt, cfg.std_mode)

    if features_dir is not None:
        features_dir = Path(features_dir)
        atomic_write_text(features_dir / "train_features.tsv", feature_tsv(data.train))
        atomic_write_text(features_dir / "test_features.tsv", feature_tsv(data.test))

    return Submission(data.test.tokens, ffd_pred, ffd_std, trt_pred, trt_std)

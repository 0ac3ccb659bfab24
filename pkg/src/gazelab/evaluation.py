"""Cross-validation, error metrics, correlation reports, the FFD -> TRT
cascade, and the four-model ensemble spread."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import GazelabError, ValidationError
from .features import CASCADE_FEATURE
from .models import Dataset, ModelConfig, TrainedModel, predict, train


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray
    seed: int

    def validation_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def training_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def sizes(self) -> list[int]:
        return np.bincount(self.assignments, minlength=self.k).tolist()


def kfold(n_rows: int, k: int, seed: int = 0) -> FoldPlan:
    """Shuffle rows with ``seed`` and deal them round-robin into ``k`` folds."""
    if not 2 <= k <= n_rows:
        raise ValidationError(f"k must satisfy 2 <= k <= n_rows ({n_rows}), got {k}")
    perm = np.random.default_rng(seed).permutation(n_rows)
    assignments = np.empty(n_rows, dtype=np.int64)
    assignments[perm] = np.arange(n_rows) % k
    assignments.setflags(write=False)
    return FoldPlan(k, assignments, seed)


def _check_pair(pred, gold):
    pred = np.asarray(pred, dtype=np.float64).reshape(-1)
    gold = np.asarray(gold, dtype=np.float64).reshape(-1)
    if len(pred) != len(gold):
        raise ValidationError(f"length mismatch: {len(pred)} predictions, {len(gold)} gold")
    if len(pred) == 0:
        raise ValidationError("metrics need at least one value")
    return pred, gold


def mae(pred, gold) -> float:
    pred, gold = _check_pair(pred, gold)
    return float(np.mean(np.abs(pred - gold)))


def rmse(pred, gold) -> float:
    pred, gold = _check_pair(pred, gold)
    return float(math.sqrt(np.mean((pred - gold) ** 2)))


@dataclass
class EvalReport:
    label: str
    config: dict
    mae: float
    rmse: float
    folds: list = field(default_factory=list)
    predictions: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"label": self.label, "config": self.config, "mae": self.mae,
                "rmse": self.rmse, "folds": self.folds}


class FoldError(GazelabError):
    def __init__(self, fold: int, cause: Exception):
        self.fold = fold
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"fold {fold}: {cause}")


def out_of_fold(data: Dataset, fit, plan: FoldPlan) -> np.ndarray:
    """Pooled out-of-fold predictions; ``fit(train_data)`` returns a predictor."""
    if len(plan.assignments) != len(data):
        raise ValidationError(
            f"fold plan covers {len(plan.assignments)} rows, dataset has {len(data)}"
        )
    pooled = np.empty(len(data))
    for fold in range(plan.k):
        held = plan.validation_rows(fold)
        try:
            predictor = fit(data.subset(plan.training_rows(fold)))
            pooled[held] = predictor(data.subset(held))
        except GazelabError as exc:
            raise FoldError(fold, exc) from exc
    return pooled


def cross_validate(data: Dataset, cfg: ModelConfig, plan: FoldPlan) -> EvalReport:
    """Train on each fold's complement and score the pooled predictions once."""

    def fit(train_data):
        model = train(train_data, cfg)
        return lambda held: predict(model, held)

    pooled = out_of_fold(data, fit, plan)
    return _report(cfg.label, cfg.to_dict(), pooled, data.y, plan)


def _report(label, config, pooled, gold, plan) -> EvalReport:
    folds = []
    for fold in range(plan.k):
        held = plan.validation_rows(fold)
        folds.append({"fold": fold, "n": int(len(held)),
                      "mae": mae(pooled[held], gold[held]),
                      "rmse": rmse(pooled[held], gold[held])})
    return EvalReport(label, config, mae(pooled, gold), rmse(pooled, gold), folds, pooled)


class MeanBaseline:
    """Predicts the training mean; the reference point for model sanity checks."""

    label = "mean baseline"

    def fit(self, data: Dataset):
        mean = float(np.mean(data.y))
        return lambda held: np.full(len(held), mean)


def cross_validate_baseline(data: Dataset, plan: FoldPlan) -> EvalReport:
    pooled = out_of_fold(data, MeanBaseline().fit, plan)
    return _report(MeanBaseline.label, {"family": "mean"}, pooled, data.y, plan)


class Correlation(NamedTuple):
    feature: str
    r: float
    zero_variance: bool


def pearson(x, y) -> tuple[float, bool]:
    """Pearson r; (0.0, True) if either side has zero variance."""
    x = np.asarray(x, dtype=np.float64) - np.mean(x)
    y = np.asarray(y, dtype=np.float64) - np.mean(y)
    sxx = float(x @ x)
    syy = float(y @ y)
    if sxx == 0 or syy == 0:
        return 0.0, True
    r = float(x @ y) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r)), False


def feature_importance(data: Dataset, target=None) -> list[Correlation]:
    """Per-feature Pearson correlation with the target, strongest |r| first."""
    if len(data) == 0:
        raise ValidationError("feature importance needs data")
    if len(data) < 2:
        raise ValidationError("feature importance needs at least 2 rows")
    y = data.y if target is None else np.asarray(target, dtype=np.float64)
    if len(y) != len(data):
        raise ValidationError("target length does not match the dataset")
    rows = []
    for j, name in enumerate(data.feature_names):
        r, flat = pearson(data.X[:, j], y)
        rows.append(Correlation(name, r, flat))
    return sorted(rows, key=lambda c: -abs(c.r))


@dataclass
class Cascade:
    """The FFD model, the TRT model trained with an ``ffd_hat`` column, and the
    bookkeeping showing which model produced each training row's ``ffd_hat``."""

    model_ffd: TrainedModel
    model_trt: TrainedModel
    ffd_hat: np.ndarray | None
    plan: FoldPlan | None
    insample: bool = False

    @property
    def enabled(self) -> bool:
        return CASCADE_FEATURE in self.model_trt.feature_schema

    def trt_features(self, test: Dataset, ffd_pred=None) -> Dataset:
        if not self.enabled:
            return test
        if ffd_pred is None:
            ffd_pred = predict(self.model_ffd, test)
        return test.with_column(CASCADE_FEATURE, ffd_pred)

    def predict(self, test: Dataset):
        """Return (FFD predictions, TRT predictions) for a 14-feature dataset."""
        ffd = predict(self.model_ffd, test)
        return ffd, predict(self.model_trt, self.trt_features(test, ffd))


def cascade_ffd_hat(data: Dataset, cfg_ffd: ModelConfig, k: int = 10, seed: int = 0,
                    insample: bool = False, model_ffd: TrainedModel | None = None):
    """Predicted FFD for training rows: out-of-fold by default, or in-sample.

    Returns (ffd_hat, plan); plan is None in in-sample mode.
    """
    if insample:
        model = model_ffd or train(data, cfg_ffd)
        return predict(model, data), None
    plan = kfold(len(data), min(k, len(data)), seed)

    def fit(train_data):
        model = train(train_data, cfg_ffd)
        return lambda held: predict(model, held)

    return out_of_fold(data, fit, plan), plan


def cascade_train(data: Dataset, trt_target, cfg_ffd: ModelConfig, cfg_trt: ModelConfig,
                  cascade: bool = True, insample: bool = False, k: int = 10,
                  seed: int = 0) -> Cascade:
    """Train the FFD model on ``data`` and a TRT model on ``trt_target``.

    With ``cascade`` the TRT model sees a fifteenth column, ``ffd_hat``. For
    training rows it comes from k-fold predictions, so no row's ``ffd_hat``
    is produced by a model that saw that row (``insample=True`` instead uses
    the full FFD model's fitted values).
    """
    model_ffd = train(data, cfg_ffd)
    trt_data = data.with_target(trt_target)
    ffd_hat = plan = None
    if cascade:
        ffd_hat, plan = cascade_ffd_hat(data, cfg_ffd, k, seed, insample, model_ffd)
        trt_data = trt_data.with_column(CASCADE_FEATURE, ffd_hat)
    model_trt = train(trt_data, cfg_trt)
    return Cascade(model_ffd, model_trt, ffd_hat, plan, insample)


STD_MODES = ("sample", "population")


def ensemble_std(models, test: Dataset, mode: str = "sample") -> np.ndarray:
    """Per-row standard deviation across the predictions of four models."""
    models = list(models)
    if len(models) != 4:
        raise ValidationError(f"ensemble_std needs exactly 4 models, got {len(models)}")
    if mode not in STD_MODES:
        raise ValidationError(f"std mode must be one of {STD_MODES}")
    schema = models[0].feature_schema
    for m in models[1:]:
        if m.feature_schema != schema:
            raise ValidationError("ensemble models do not share one feature schema")
    preds = np.stack([predict(m, test) for m in models])
    return preds.std(axis=0, ddof=1 if mode == "sample" else 0)


def format_report_table(reports, title: str = "") -> str:
    """Plain-text MAE/RMSE table, one row per report."""
    width = max([len(r.label) for r in reports] + [5])
    lines = []
    if title:
        lines.append(title)
    lines.append(f"{'Model':<{width}}  {'MAE':>10}  {'RMSE':>10}")
    lines.append("-" * (width + 24))
    for r in reports:
        lines.append(f"{r.label:<{width}}  {r.mae:>10.4f}  {r.rmse:>10.4f}")
    return "\n".join(lines) + "\n"


def format_importance(rows, top: int | None = None, title: str = "") -> str:
    rows = rows[:top] if top else rows
    width = max([len(c.feature) for c in rows] + [7])
    lines = [title] if title else []
    for c in rows:
        flag = "  (zero variance)" if c.zero_variance else ""
        lines.append(f"{c.feature:<{width}}  {c.r:>8.4f}{flag}")
    return "\n".join(lines) + "\n"


def reports_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1) + "\n"

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import FormatError, ValidationError
from .config import ModelConfig
from .dataset import Dataset

MODEL_FORMAT = "gazelab-model"
MODEL_VERSION = 1

# family -> (predict(model, X_raw) -> y, encode(params) -> json, decode(json) -> params)
_FAMILIES: dict = {}


def register(family, predict_fn, encode, decode):
    _FAMILIES[family] = (predict_fn, encode, decode)


@dataclass(frozen=True)
class TrainedModel:
    config: ModelConfig
    feature_schema: tuple
    normalization: dict = field(repr=False)
    parameters: dict = field(repr=False)

    @property
    def family(self) -> str:
        return self.config.family


def as_matrix(model: TrainedModel, features, feature_names=None) -> np.ndarray:
    if isinstance(features, Dataset):
        feature_names = features.feature_names
        features = features.X
    elif hasattr(features, "as_row"):
        features = features.as_row()
    X = np.asarray(features, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2:
        raise ValidationError(f"expected a row or a matrix, got shape {X.shape}")
    if feature_names is not None and tuple(feature_names) != model.feature_schema:
        raise ValidationError(
            f"feature schema mismatch: model expects {list(model.feature_schema)}, "
            f"got {list(feature_names)}"
        )
    if X.shape[1] != len(model.feature_schema):
        raise ValidationError(
            f"feature schema mismatch: model expects {len(model.feature_schema)} "
            f"columns, got {X.shape[1]}"
        )
    if not np.isfinite(X).all():
        raise ValidationError("non-finite feature value")
    return X


def predict(model: TrainedModel, features, feature_names=None):
    """Predict one row (returns a float) or a matrix (returns an array)."""
    single = (
        not isinstance(features, Dataset)
        and np.ndim(features.as_row() if hasattr(features, "as_row") else features) == 1
    )
    X = as_matrix(model, features, feature_names)
    y = np.asarray(_FAMILIES[model.family][0](model, X), dtype=np.float64)
    return float(y[0]) if single else y


def save_model(model: TrainedModel) -> dict:
    encode = _FAMILIES[model.family][1]
    return {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "config": model.config.to_dict(),
        "feature_schema": list(model.feature_schema),
        "normalization": {k: np.asarray(v).tolist() for k, v in model.normalization.items()},
        "parameters": encode(model.parameters),
    }


def load_model(doc: dict) -> TrainedModel:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise FormatError("not a model document")
    if doc.get("version") != MODEL_VERSION:
        raise FormatError(
            f"model version {doc.get('version')!r} is not supported (expected {MODEL_VERSION})"
        )
    try:
        config = ModelConfig.from_dict(doc["config"])
        decode = _FAMILIES[config.family][2]
        return TrainedModel(
            config,
            tuple(doc["feature_schema"]),
            {k: np.asarray(v, dtype=np.float64) for k, v in doc["normalization"].items()},
            decode(doc["parameters"]),
        )
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise FormatError(f"corrupt model document: {exc!r}") from exc


def save_model_file(model: TrainedModel, path) -> None:
    from ..corpus import atomic_write_text

    atomic_write_text(path, json.dumps(save_model(model), indent=1) + "\n")


def load_model_file(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}", path) from exc
    return load_model(doc)


def minmax_stats(X: np.ndarray):
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)
    return lo, span

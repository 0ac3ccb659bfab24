"""k-nearest-neighbour regression on min-max scaled features.

The prediction is the plain mean target of the ``k`` closest training rows
by Euclidean distance. Equal distances go to the lower training-row index.
"""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from .base import TrainedModel, minmax_stats, register
from .config import ModelConfig
from .dataset import Dataset

# caps the (chunk, n_train, n_features) difference tensor
_CHUNK_ELEMENTS = 4_000_000


def train_knn(data: Dataset, cfg: ModelConfig) -> TrainedModel:
    if cfg.family != "knn":
        raise ValidationError(f"expected a knn config, got {cfg.family!r}")
    if cfg.k > len(data):
        raise ValidationError(f"knn.k={cfg.k} exceeds the {len(data)} training rows")
    lo, span = minmax_stats(data.X)
    return TrainedModel(
        cfg,
        data.feature_names,
        {"x_min": lo, "x_span": span},
        {"X": (data.X - lo) / span, "y": data.y.copy(), "k": cfg.k},
    )


def neighbours(model: TrainedModel, X) -> np.ndarray:
    """Indices of the k nearest training rows for each query row."""
    norm = model.normalization
    train = model.parameters["X"]
    k = model.parameters["k"]
    Q = (np.asarray(X, dtype=np.float64) - norm["x_min"]) / norm["x_span"]
    step = max(1, _CHUNK_ELEMENTS // max(1, train.size))
    out = np.empty((len(Q), k), dtype=np.int64)
    for start in range(0, len(Q), step):
        block = Q[start : start + step]
        d = ((block[:, None, :] - train[None, :, :]) ** 2).sum(axis=2)
        out[start : start + step] = np.argsort(d, axis=1, kind="stable")[:, :k]
    return out


def _predict(model, X):
    idx = neighbours(model, X)
    return model.parameters["y"][idx].mean(axis=1)


def _encode(p):
    return {"X": p["X"].tolist(), "y": p["y"].tolist(), "k": int(p["k"])}


def _decode(d):
    X = np.asarray(d["X"], dtype=np.float64)
    return {"X": X.reshape(len(d["y"]), -1), "y": np.asarray(d["y"], dtype=np.float64),
            "k": int(d["k"])}


register("knn", _predict, _encode, _decode)

"""Regressors used for reading-time prediction, behind one train/predict API."""

from .base import (
    TrainedModel,
    load_model,
    load_model_file,
    predict,
    save_model,
    save_model_file,
)
from .config import (
    FAMILIES,
    ModelConfig,
    best_ffd_configs,
    best_trt_configs,
    default_grid,
)
from .dataset import Dataset
from .forest import train_rf
from .knn import train_knn
from .linreg import train_linreg
from .mlp import train_mlp

_TRAINERS = {
    "linreg": train_linreg,
    "mlp": train_mlp,
    "rf": train_rf,
    "knn": train_knn,
}


def train(data: Dataset, cfg: ModelConfig) -> TrainedModel:
    """Fit the model family named by ``cfg.family``."""
    return _TRAINERS[cfg.family](data, cfg)


__all__ = [
    "Dataset",
    "FAMILIES",
    "ModelConfig",
    "TrainedModel",
    "best_ffd_configs",
    "best_trt_configs",
    "load_model",
    "load_model_file",
    "predict",
    "save_model",
    "save_model_file",
    "default_grid",
    "train",
    "train_knn",
    "train_linreg",
    "train_mlp",
    "train_rf",
]

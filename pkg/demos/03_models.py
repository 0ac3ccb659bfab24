"""
Comparing regressors with cross-validation
==========================================

Four model families share one train/predict interface. Here they are
compared on a synthetic problem where the target depends nonlinearly on
three of fourteen columns.
"""

import numpy as np

from gazelab.evaluation import (
    cross_validate,
    cross_validate_baseline,
    feature_importance,
    format_importance,
    format_report_table,
    kfold,
)
from gazelab.models import Dataset, ModelConfig

rng = np.random.default_rng(0)
X = rng.uniform(-1, 1, size=(600, 14))
y = 200 + 40 * np.sin(3 * X[:, 0]) + 30 * X[:, 1] * X[:, 2] + rng.normal(0, 5, 600)
data = Dataset.synthetic(X, y)

# Pooled 10-fold predictions, scored once over all rows.
plan = kfold(len(data), 10, seed=0)
configs = [
    ModelConfig("linreg", selection="m5"),
    ModelConfig("mlp", lr=0.05, momentum=0.2, epochs=200),
    ModelConfig("rf", trees=50),
    ModelConfig("knn", k=5),
]
reports = [cross_validate_baseline(data, plan)] + [cross_validate(data, c, plan) for c in configs]
print(format_report_table(reports, "10-fold CV"))

# Which columns carry a linear signal?
print(format_importance(feature_importance(data), top=5, title="Top correlations"))

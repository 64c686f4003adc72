"""Linear classifier used by the separability measures.

The model minimizes unregularized hinge loss with full-batch gradient
descent (default 500 epochs, learning rate 0.01, zero-initialized
weights), which is deterministic for a fixed configuration.  Features
come from :func:`mlrepo.learners.encoding.feature_encoding`: min-max
scaled numerics with mean imputation, one-hot nominals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..model import Dataset
from .encoding import FeatureEncoding, feature_encoding


@dataclass(frozen=True)
class LinearConfig:
    epochs: int = 500
    learning_rate: float = 0.01
    seed: int = 0


@dataclass
class LinearModel:
    """One-vs-rest separator for ``positive_class``."""

    weights: np.ndarray
    bias: float
    positive_class: int

    def decision_values(self, matrix: np.ndarray) -> np.ndarray:
        return matrix @ self.weights + self.bias

    def predict_positive(self, matrix: np.ndarray) -> np.ndarray:
        return self.decision_values(matrix) >= 0.0


def train_linear(dataset: Dataset, positive_class: int,
                 config: LinearConfig = LinearConfig(),
                 encoding: FeatureEncoding | None = None) -> LinearModel:
    """Fit a hinge-loss separator of ``positive_class`` against the rest."""
    enc = encoding or feature_encoding(dataset)
    y = np.where(enc.labels == positive_class, 1.0, -1.0)
    if len(set(y)) < 2:
        raise DataError("linear training needs instances on both sides")
    x = enc.matrix
    n = x.shape[0]
    w = np.zeros(x.shape[1])
    b = 0.0
    for _ in range(config.epochs):
        margins = y * (x @ w + b)
        violating = margins < 1.0
        if not violating.any():
            break
        coeff = y * violating
        w += config.learning_rate * (coeff @ x) / n
        b += config.learning_rate * coeff.sum() / n
    return LinearModel(w, float(b), positive_class)


def training_error(model: LinearModel, dataset: Dataset,
                   encoding: FeatureEncoding | None = None) -> float:
    """Misclassification rate of the binary task on its training data."""
    enc = encoding or feature_encoding(dataset)
    actual_positive = enc.labels == model.positive_class
    predicted = model.predict_positive(enc.matrix)
    return float(np.mean(predicted != actual_positive))


def linear_error_distance(model: LinearModel, dataset: Dataset,
                          encoding: FeatureEncoding | None = None) -> float:
    """Mean margin-violation distance: the summed distance of misclassified
    instances to the separating hyperplane, divided by the instance count."""
    enc = encoding or feature_encoding(dataset)
    norm = float(np.linalg.norm(model.weights))
    if norm == 0.0:
        raise DataError("degenerate model: zero weight vector")
    decisions = model.decision_values(enc.matrix)
    actual_positive = enc.labels == model.positive_class
    wrong = (decisions >= 0.0) != actual_positive
    total = float(np.abs(decisions[wrong]).sum()) / norm
    return total / enc.matrix.shape[0]


def one_vs_rest_predict(models: list[LinearModel],
                        matrix: np.ndarray) -> np.ndarray:
    """Class with the highest decision value; ties to the lowest class."""
    scores = np.stack([m.decision_values(matrix) for m in models])
    return scores.argmax(axis=0)

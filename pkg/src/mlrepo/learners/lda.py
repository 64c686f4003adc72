"""Fisher linear discriminant with pairwise voting for multi-class data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..model import Dataset
from .crossval import cross_val_accuracy
from .encoding import FeatureEncoding, feature_encoding

RIDGE = 1e-6


@dataclass
class PairDiscriminant:
    class_a: int
    class_b: int
    direction: np.ndarray
    cut: float

    def vote(self, matrix: np.ndarray) -> np.ndarray:
        """Per row: class_a where the projection clears the cut, else class_b."""
        projected = matrix @ self.direction
        return np.where(projected >= self.cut, self.class_a, self.class_b)


@dataclass
class LdaModel:
    pairs: list[PairDiscriminant]
    classes: list[int]
    fallback: int

    def predict(self, matrix: np.ndarray) -> np.ndarray:
        if not self.pairs:
            return np.full(matrix.shape[0], self.fallback, dtype=int)
        votes = np.zeros((matrix.shape[0], max(self.classes) + 1), dtype=int)
        for pair in self.pairs:
            chosen = pair.vote(matrix)
            for c in (pair.class_a, pair.class_b):
                votes[:, c] += chosen == c
        return votes.argmax(axis=1)


def _fit_pair(matrix, labels, a: int, b: int) -> PairDiscriminant:
    xa, xb = matrix[labels == a], matrix[labels == b]
    mean_a, mean_b = xa.mean(axis=0), xb.mean(axis=0)
    scatter = ((xa - mean_a).T @ (xa - mean_a)
               + (xb - mean_b).T @ (xb - mean_b))
    scatter[np.diag_indices_from(scatter)] += RIDGE
    try:
        direction = np.linalg.solve(scatter, mean_a - mean_b)
    except np.linalg.LinAlgError:
        raise DataError("singular within-class scatter") from None
    if not np.isfinite(direction).all():
        raise DataError("singular within-class scatter")
    # orient so class_a projects high
    if (mean_a - mean_b) @ direction < 0:
        direction = -direction
    cut = float(direction @ (mean_a + mean_b) / 2.0)
    return PairDiscriminant(a, b, direction, cut)


def fit_lda(dataset: Dataset, rows=None,
            encoding: FeatureEncoding | None = None) -> LdaModel:
    """Fit pairwise Fisher discriminants on the given rows (default: all)."""
    enc = encoding or feature_encoding(dataset)
    if enc.n_features == 0:
        raise DataError("discriminant training needs at least one feature")
    rows = np.arange(dataset.n_instances) if rows is None else np.asarray(rows)
    matrix, labels = enc.matrix[rows], enc.labels[rows]
    classes = sorted(set(labels.tolist()))
    pairs = [_fit_pair(matrix, labels, a, b)
             for i, a in enumerate(classes) for b in classes[i + 1:]]
    counts = [(labels == c).sum() for c in classes]
    fallback = classes[int(np.argmax(counts))]
    return LdaModel(pairs, classes, fallback)


def train_lda(dataset: Dataset, n_folds: int = 10) -> tuple[LdaModel, float]:
    """Fit on the full dataset and report stratified CV accuracy (seed 0)."""
    if len(set(dataset.class_labels())) < 2:
        raise DataError("discriminant training needs at least 2 classes")
    enc = feature_encoding(dataset)

    def fit_predict(train, test):
        model = fit_lda(dataset, train, enc)
        return model.predict(enc.matrix[np.asarray(test)]).tolist()

    accuracy = cross_val_accuracy(dataset, fit_predict, n_folds, seed=0)
    return fit_lda(dataset, None, enc), accuracy

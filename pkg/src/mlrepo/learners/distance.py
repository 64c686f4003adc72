"""Heterogeneous distance metric and nearest-neighbor error rates.

The per-attribute distance is |a - b| for numeric attributes after min-max
normalization, 0/1 equality for nominal attributes, and 1 whenever either
operand is missing; attribute distances aggregate as Euclidean.  Ties in
neighbor selection always go to the lowest instance index.
"""

from __future__ import annotations

import numpy as np

from ..errors import DataError
from ..model import Dataset
from .encoding import DistanceEncoding, distance_encoding


def _pairwise_sq(num_a, nom_a, num_b, nom_b) -> np.ndarray:
    out = np.zeros((num_a.shape[0], num_b.shape[0]))
    if num_a.shape[1]:
        diff = np.abs(num_a[:, None, :] - num_b[None, :, :])
        diff = np.where(np.isnan(diff), 1.0, diff)
        out += (diff ** 2).sum(axis=2)
    if nom_a.shape[1]:
        a, b = nom_a[:, None, :], nom_b[None, :, :]
        unequal = (a != b) | np.isnan(a) | np.isnan(b)
        out += unequal.sum(axis=2)
    return out


def pairwise_distances(dataset: Dataset,
                       encoding: DistanceEncoding | None = None) -> np.ndarray:
    """Full n-by-n distance matrix over the dataset's instances."""
    enc = encoding or distance_encoding(dataset)
    sq = _pairwise_sq(enc.numeric, enc.nominal, enc.numeric, enc.nominal)
    return np.sqrt(sq)


def distances_to(dataset: Dataset, rows,
                 encoding: DistanceEncoding | None = None) -> np.ndarray:
    """Distances from extra rows to every dataset instance, using the
    dataset's normalization."""
    enc = encoding or distance_encoding(dataset)
    num, nom = enc.encode_rows(rows)
    return np.sqrt(_pairwise_sq(num, nom, enc.numeric, enc.nominal))


def nearest_neighbor_indices(distances: np.ndarray, k: int,
                             exclude_self: bool = True) -> np.ndarray:
    """Index matrix of each row's k nearest columns, ties by lowest index."""
    d = distances.copy()
    if exclude_self:
        np.fill_diagonal(d, np.inf)
    # stable sort keeps the lowest index first among equal distances
    order = np.argsort(d, axis=1, kind="stable")
    return order[:, :k]


def loo_1nn_error(dataset: Dataset,
                  encoding: DistanceEncoding | None = None) -> float:
    """Leave-one-out error rate of the one-nearest-neighbor classifier."""
    n = dataset.n_instances
    if n < 2:
        raise DataError("leave-one-out 1-NN needs at least 2 instances")
    distances = pairwise_distances(dataset, encoding)
    neighbors = nearest_neighbor_indices(distances, 1)[:, 0]
    labels = np.array(dataset.class_labels())
    return float(np.mean(labels[neighbors] != labels))


def knn_predict(train: Dataset, rows, k: int = 1,
                encoding: DistanceEncoding | None = None) -> list[int]:
    """Predict classes for rows by majority vote among the k nearest
    training instances (ties: lowest class index, then nearest)."""
    distances = distances_to(train, rows, encoding)
    order = np.argsort(distances, axis=1, kind="stable")[:, :k]
    labels = np.array(train.class_labels())
    out = []
    for neighbor_row in order:
        votes = np.bincount(labels[neighbor_row], minlength=train.n_classes)
        out.append(int(votes.argmax()))
    return out

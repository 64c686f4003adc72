"""Deterministic stratified cross-validation used by landmarkers and the
built-in experiment runner."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..model import Dataset


def stratified_folds(labels: Sequence[int], n_folds: int,
                     seed: int) -> list[list[int]]:
    """Split instance indices into stratified folds.

    Within each class the indices are shuffled with a seeded generator and
    dealt round-robin, so the partition is deterministic for (labels,
    n_folds, seed).  The fold count is capped at the instance count.
    """
    n = len(labels)
    n_folds = max(2, min(n_folds, n)) if n >= 2 else 1
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    by_class: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    position = 0
    for label in sorted(by_class):
        members = by_class[label]
        order = rng.permutation(len(members))
        for j in order:
            folds[position % n_folds].append(members[j])
            position += 1
    return [sorted(f) for f in folds]


def cross_val_predictions(dataset: Dataset,
                          fit_predict: Callable[[list[int], list[int]], list[int]],
                          n_folds: int = 10,
                          seed: int = 0) -> list[int | None]:
    """Out-of-fold prediction for every instance.

    ``fit_predict(train_rows, test_rows)`` must return one predicted class
    index per test row.  Folds that would leave an empty training set are
    skipped (their instances stay None).
    """
    labels = dataset.class_labels()
    predictions: list[int | None] = [None] * dataset.n_instances
    for fold in stratified_folds(labels, n_folds, seed):
        train = sorted(set(range(dataset.n_instances)) - set(fold))
        if not train or not fold:
            continue
        for index, predicted in zip(fold, fit_predict(train, fold)):
            predictions[index] = predicted
    return predictions


def pooled_accuracy(dataset: Dataset,
                    predictions: Sequence[int | None]) -> float:
    pairs = [(p, dataset.class_of(i)) for i, p in enumerate(predictions)
             if p is not None]
    if not pairs:
        return 0.0
    return sum(p == actual for p, actual in pairs) / len(pairs)


def cross_val_accuracy(dataset: Dataset, fit_predict, n_folds: int = 10,
                       seed: int = 0) -> float:
    """Pooled accuracy of out-of-fold predictions."""
    return pooled_accuracy(
        dataset, cross_val_predictions(dataset, fit_predict, n_folds, seed))

"""Decision stumps for landmarking.

A stump is a one-node tree: numeric attributes split at the information-
gain-optimal midpoint, nominal attributes branch per observed category.
Four selection modes exist: the attribute with the highest gain, the
lowest gain, a randomly chosen one, or one stump per attribute with the
average accuracy reported.  Accuracy is stratified 10-fold cross-validation
(partition seed 0) pooled over folds.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DataError
from ..model import CellValue, Dataset
from .crossval import cross_val_accuracy
from .splits import (best_split_of_attribute, class_histogram,
                     information_gain, majority_class)


class StumpMode(Enum):
    BEST = "best"
    WORST = "worst"
    RANDOM = "random"
    AVERAGE = "average"


@dataclass
class StumpModel:
    attribute: int
    threshold: float | None
    categories: tuple[int, ...] | None
    branch_labels: tuple[int, ...]
    majority_branch: int
    fallback_label: int

    def classify(self, row) -> int:
        value: CellValue = row[self.attribute]
        if not self.branch_labels:
            return self.fallback_label
        if value is None:
            return self.branch_labels[self.majority_branch]
        if self.threshold is not None:
            return self.branch_labels[0 if value <= self.threshold else 1]
        try:
            return self.branch_labels[self.categories.index(int(value))]
        except ValueError:
            return self.branch_labels[self.majority_branch]


@dataclass
class StumpResult:
    mode: StumpMode
    models: tuple[StumpModel, ...]
    cv_accuracy: float


def _eligible_attributes(dataset: Dataset, rows) -> list[int]:
    out = []
    for a in dataset.non_class_indices:
        if any(dataset.instances[i][a] is not None for i in rows):
            out.append(a)
    return out


def fit_stump(dataset: Dataset, rows, attribute: int) -> StumpModel:
    """Single-attribute stump over the given training rows."""
    split = best_split_of_attribute(dataset, rows, attribute)
    fallback = majority_class(class_histogram(dataset, rows))
    if split is None:
        return StumpModel(attribute, None, None, (), 0, fallback)
    labels = tuple(majority_class(class_histogram(dataset, b))
                   for b in split.branches)
    sizes = [len(b) for b in split.branches]
    return StumpModel(attribute, split.threshold, split.categories, labels,
                      sizes.index(max(sizes)), fallback)


def _pick_attribute(dataset: Dataset, rows, mode: StumpMode,
                    rng: np.random.Generator) -> int:
    eligible = _eligible_attributes(dataset, rows)
    if not eligible:
        raise DataError("every attribute is all-missing")
    if mode is StumpMode.RANDOM:
        return eligible[int(rng.integers(len(eligible)))]
    gains = [(information_gain(dataset, rows, a), a) for a in eligible]
    if mode is StumpMode.BEST:
        return max(gains, key=lambda g: (g[0], -g[1]))[1]
    return min(gains, key=lambda g: (g[0], g[1]))[1]


def train_stump(dataset: Dataset, mode: StumpMode, seed: int = 0,
                n_folds: int = 10) -> StumpResult:
    """Train stump(s) on the full dataset and cross-validate the mode.

    BEST/WORST re-select their attribute on each training fold; RANDOM
    draws per fold from one seeded generator; AVERAGE evaluates one stump
    per attribute and averages the accuracies.
    """
    if len(set(dataset.class_labels())) < 2:
        raise DataError("stump training needs at least 2 classes present")
    all_rows = list(range(dataset.n_instances))
    if mode is StumpMode.AVERAGE:
        eligible = _eligible_attributes(dataset, all_rows)
        if not eligible:
            raise DataError("every attribute is all-missing")
        accuracies = []
        models = []
        for a in eligible:
            def fit_predict(train, test, a=a):
                stump = fit_stump(dataset, train, a)
                return [stump.classify(dataset.instances[i]) for i in test]
            accuracies.append(
                cross_val_accuracy(dataset, fit_predict, n_folds, seed=0))
            models.append(fit_stump(dataset, all_rows, a))
        return StumpResult(mode, tuple(models),
                           sum(accuracies) / len(accuracies))

    rng = np.random.default_rng(seed)

    def fit_predict(train, test):
        stump = fit_stump(dataset, train,
                          _pick_attribute(dataset, train, mode, rng))
        return [stump.classify(dataset.instances[i]) for i in test]

    accuracy = cross_val_accuracy(dataset, fit_predict, n_folds, seed=0)
    final = fit_stump(dataset, all_rows,
                      _pick_attribute(dataset, all_rows, mode, rng))
    return StumpResult(mode, (final,), accuracy)

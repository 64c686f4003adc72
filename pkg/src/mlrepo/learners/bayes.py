"""Per-class conditional density estimates behind the class-likelihood
hardness measure.

Nominal attributes get Laplace-smoothed category frequencies,
(count + 1) / (observed-in-class + category-count), so the conditionals
of one attribute sum to 1 within a class.  Numeric attributes get a
Gaussian fit on the class's observed values with a variance floor of
1e-9.  A class that never observes an attribute contributes a neutral
factor of 1 for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DataError
from ..model import CellValue, Dataset

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class NominalConditional:
    probabilities: tuple[float, ...]

    def density(self, value: int) -> float:
        return self.probabilities[value]


@dataclass(frozen=True)
class GaussianConditional:
    mean: float
    variance: float

    def density(self, value: float) -> float:
        var = max(self.variance, VARIANCE_FLOOR)
        z = (value - self.mean) ** 2 / (2.0 * var)
        return math.exp(-z) / math.sqrt(2.0 * math.pi * var)


Conditional = NominalConditional | GaussianConditional | None


@dataclass
class ClassConditionalModel:
    #: conditionals[class_index][attribute_index]
    conditionals: dict[int, dict[int, Conditional]]

    def factor(self, class_index: int, attribute: int,
               value: CellValue) -> float:
        """p(value | class) for one attribute; missing values and
        unobservable attributes contribute 1."""
        if value is None:
            return 1.0
        conditional = self.conditionals[class_index][attribute]
        if conditional is None:
            return 1.0
        if isinstance(conditional, NominalConditional):
            return conditional.density(int(value))
        return conditional.density(float(value))


def fit_class_conditionals(dataset: Dataset) -> ClassConditionalModel:
    counts = dataset.class_counts()
    present = [c for c in range(dataset.n_classes) if counts[c] > 0]
    if not present:
        raise DataError("no class labels present")
    by_class: dict[int, list[int]] = {c: [] for c in present}
    for i in range(dataset.n_instances):
        by_class[dataset.class_of(i)].append(i)

    conditionals: dict[int, dict[int, Conditional]] = {}
    for c, members in by_class.items():
        per_attr: dict[int, Conditional] = {}
        for a in dataset.non_class_indices:
            spec = dataset.attributes[a]
            observed = [dataset.instances[i][a] for i in members
                        if dataset.instances[i][a] is not None]
            if spec.is_nominal:
                k = len(spec.categories)
                tally = [0] * k
                for v in observed:
                    tally[int(v)] += 1
                denom = len(observed) + k
                per_attr[a] = NominalConditional(
                    tuple((t + 1) / denom for t in tally))
            elif observed:
                values = [float(v) for v in observed]
                mean = sum(values) / len(values)
                variance = sum((v - mean) ** 2 for v in values) / len(values)
                per_attr[a] = GaussianConditional(mean, variance)
            else:
                per_attr[a] = None
        conditionals[c] = per_attr
    return ClassConditionalModel(conditionals)

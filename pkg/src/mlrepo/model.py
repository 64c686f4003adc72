"""Core domain types: datasets, experiment identity, fold assignments, predictions.

Conventions used throughout the package:

* attribute values are ``float`` (numeric), ``int`` (nominal category index)
  or ``None`` (missing);
* instance indices and class indices are 0-based in memory.  Serialized
  forms (store documents, run files, exported tables) use 1-based instance
  numbers and 1-based class values; the conversion happens at those
  boundaries, never here.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import DataError

CellValue = float | int | None

#: Role of an instance inside one fold: ``None`` marks a test instance,
#: ``0.0`` a filtered instance, and any weight in (0, 1] a training instance.
Role = float | None

TEST: Role = None
FILTERED: Role = 0.0


@dataclass(frozen=True)
class AttributeSpec:
    """One typed column of a dataset.

    ``categories`` is ``None`` for numeric attributes and the ordered tuple
    of category names for nominal ones.
    """

    name: str
    categories: tuple[str, ...] | None = None

    @property
    def is_nominal(self) -> bool:
        return self.categories is not None

    @property
    def is_numeric(self) -> bool:
        return self.categories is None


def numeric(name: str) -> AttributeSpec:
    return AttributeSpec(name)

def nominal(name: str, categories: Iterable[str]) -> AttributeSpec:
    return AttributeSpec(name, tuple(categories))


@dataclass(frozen=True)
class Dataset:
    """A named, typed table of instances with one nominal class attribute."""

    name: str
    attributes: tuple[AttributeSpec, ...]
    instances: tuple[tuple[CellValue, ...], ...]
    class_index: int = -1

    def __post_init__(self):
        if self.class_index < 0:
            object.__setattr__(self, "class_index",
                               len(self.attributes) + self.class_index)

    @staticmethod
    def build(name: str,
              attributes: Sequence[AttributeSpec],
              rows: Iterable[Sequence[CellValue]],
              class_index: int = -1) -> "Dataset":
        """Construct a dataset from mutable sequences."""
        return Dataset(name, tuple(attributes),
                       tuple(tuple(r) for r in rows), class_index)

    @property
    def n_instances(self) -> int:
        return len(self.instances)

    @property
    def class_attribute(self) -> AttributeSpec:
        return self.attributes[self.class_index]

    @property
    def n_classes(self) -> int:
        cats = self.class_attribute.categories
        return len(cats) if cats is not None else 0

    @property
    def non_class_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(len(self.attributes))
                     if i != self.class_index)

    @property
    def n_attributes(self) -> int:
        """Number of non-class attributes."""
        return len(self.attributes) - 1

    def class_of(self, row: int) -> int:
        label = self.instances[row][self.class_index]
        if label is None:
            raise DataError(f"missing class label in row {row}")
        return int(label)

    def class_labels(self) -> list[int]:
        return [self.class_of(i) for i in range(self.n_instances)]

    def class_counts(self) -> list[int]:
        counts = [0] * self.n_classes
        for label in self.class_labels():
            counts[label] += 1
        return counts

    def subset(self, rows: Sequence[int], name: str | None = None) -> "Dataset":
        return Dataset(name or self.name, self.attributes,
                       tuple(self.instances[i] for i in rows),
                       self.class_index)


@dataclass(frozen=True)
class Violation:
    """One dataset invariant breach, with coordinates when applicable."""

    message: str
    row: int | None = None
    attribute: int | None = None

    def __str__(self) -> str:
        where = []
        if self.row is not None:
            where.append(f"row {self.row}")
        if self.attribute is not None:
            where.append(f"attribute {self.attribute}")
        return f"{self.message} ({', '.join(where)})" if where else self.message


def validate_dataset(dataset: Dataset) -> list[Violation]:
    """Check every structural invariant; violations are data, not errors."""
    out: list[Violation] = []
    seen_names: set[str] = set()
    for a, spec in enumerate(dataset.attributes):
        if spec.name in seen_names:
            out.append(Violation(f"duplicate attribute name '{spec.name}'",
                                 attribute=a))
        seen_names.add(spec.name)
        if spec.categories is not None:
            if not spec.categories:
                out.append(Violation("empty category list", attribute=a))
            if len(set(spec.categories)) != len(spec.categories):
                out.append(Violation("duplicate categories", attribute=a))

    if not 0 <= dataset.class_index < len(dataset.attributes):
        out.append(Violation(f"class index {dataset.class_index} out of range"))
        return out
    if not dataset.class_attribute.is_nominal:
        out.append(Violation("class attribute is not nominal",
                             attribute=dataset.class_index))

    n_attrs = len(dataset.attributes)
    for r, row in enumerate(dataset.instances):
        if len(row) != n_attrs:
            out.append(Violation(
                f"expected {n_attrs} values, got {len(row)}", row=r))
            continue
        for a, (spec, value) in enumerate(zip(dataset.attributes, row)):
            if value is None:
                if a == dataset.class_index:
                    out.append(Violation("missing class label", row=r,
                                         attribute=a))
                continue
            if spec.is_nominal:
                if not isinstance(value, int) or isinstance(value, bool):
                    out.append(Violation(
                        f"nominal value {value!r} is not a category index",
                        row=r, attribute=a))
                elif not 0 <= value < len(spec.categories):
                    out.append(Violation(
                        f"category index {value} out of range", row=r,
                        attribute=a))
            else:
                if isinstance(value, bool) or not isinstance(value, (int, float)):
                    out.append(Violation(
                        f"numeric value {value!r} is not a number", row=r,
                        attribute=a))
                elif value != value or value in (float("inf"), float("-inf")):
                    out.append(Violation("non-finite numeric value", row=r,
                                         attribute=a))
    return out


def require_valid(dataset: Dataset) -> None:
    violations = validate_dataset(dataset)
    if violations:
        raise DataError("invalid dataset: "
                        + "; ".join(str(v) for v in violations[:5]))


@dataclass(frozen=True)
class ExperimentKey:
    """Identity of one experiment: toolkit, algorithm, hyperparameter setting.

    ``hyperparameter_seed`` of -1 means the toolkit's default settings.
    """

    toolkit: str
    algorithm: str
    hyperparameter_seed: int
    hyperparameter_string: str = ""

    @property
    def label(self) -> str:
        """Canonical ``LA_seed`` form, e.g. ``BP_1``."""
        return f"{self.algorithm}_{self.hyperparameter_seed}"

    @property
    def is_default_setting(self) -> bool:
        return self.hyperparameter_seed == -1


@dataclass(frozen=True)
class KFold:
    num_folds: int

@dataclass(frozen=True)
class PercentSplit:
    """Single random split; ``test_percent`` is the test share in percent."""

    test_percent: int

@dataclass(frozen=True)
class FixedSplit:
    pass


Scheme = KFold | PercentSplit | FixedSplit

_KEY_RE = re.compile(r"^(.+)_(-?\d+)_(\d+)_(\d+)$")


@dataclass(frozen=True)
class FoldAssignment:
    """Per-instance train/test/filtered roles of one evaluation fold.

    ``roles`` holds one entry per dataset instance: ``None`` for test,
    ``0.0`` for filtered, a weight in (0, 1] for training.
    """

    toolkit: str
    partition_seed: int
    scheme: Scheme
    fold_index: int
    roles: tuple[Role, ...]

    def __post_init__(self):
        if self.fold_index < 1:
            raise DataError("fold_index must be >= 1")
        for i, role in enumerate(self.roles):
            if role is not None and not 0.0 <= role <= 1.0:
                raise DataError(f"training weight {role} out of (0,1] "
                                f"at instance {i}")

    @property
    def key(self) -> str:
        """Canonical ``toolkit_seed_numFolds_fold`` rendering."""
        if isinstance(self.scheme, FixedSplit):
            return f"{self.toolkit}_0_0_1"
        if isinstance(self.scheme, PercentSplit):
            return (f"{self.toolkit}_{self.partition_seed}_"
                    f"{self.scheme.test_percent}_1")
        return (f"{self.toolkit}_{self.partition_seed}_"
                f"{self.scheme.num_folds}_{self.fold_index}")

    @property
    def family(self) -> str:
        """Key prefix shared by every fold of this partition."""
        return self.key.rsplit("_", 1)[0]

    def test_indices(self) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r is None]

    def is_test(self, index: int) -> bool:
        return self.roles[index] is None


def parse_partition_key(key: str, n_instances: int,
                        roles: Sequence[Role] | None = None,
                        percent_split: bool = False) -> FoldAssignment:
    """Rebuild a :class:`FoldAssignment` from its canonical key.

    ``toolkit_0_0_1`` is a fixed split.  Any other key is read as
    ``toolkit_seed_numFolds_fold``; pass ``percent_split=True`` to read the
    third component as a test percentage instead (the two renderings are
    not distinguishable from the key alone).
    """
    m = _KEY_RE.match(key)
    if m is None:
        raise DataError(f"cannot parse partition key '{key}'")
    toolkit, seed, third, fourth = (m.group(1), int(m.group(2)),
                                    int(m.group(3)), int(m.group(4)))
    scheme: Scheme
    if third == 0:
        if fourth != 1 or seed != 0:
            raise DataError(f"cannot parse partition key '{key}'")
        scheme = FixedSplit()
        fold = 1
    elif percent_split:
        if fourth != 1 or not 0 < third < 100:
            raise DataError(f"cannot parse partition key '{key}'")
        scheme = PercentSplit(third)
        fold = 1
    else:
        if not 1 <= fourth <= third:
            raise DataError(f"fold {fourth} outside 1..{third} in '{key}'")
        scheme = KFold(third)
        fold = fourth
    if roles is None:
        roles = (1.0,) * n_instances
    return FoldAssignment(toolkit, seed, scheme, fold, tuple(roles))


def check_kfold_coverage(folds: Sequence[FoldAssignment]) -> None:
    """Every instance must be a test instance in exactly one fold."""
    if not folds:
        raise DataError("no folds given")
    scheme = folds[0].scheme
    if not isinstance(scheme, KFold):
        return
    n = len(folds[0].roles)
    seen = [0] * n
    for fa in folds:
        if len(fa.roles) != n:
            raise DataError("folds disagree on instance count")
        for i in fa.test_indices():
            seen[i] += 1
    bad = [i for i, c in enumerate(seen) if c != 1]
    if bad:
        raise DataError(f"k-fold coverage violated at instance {bad[0]}: "
                        f"tested {seen[bad[0]]} times")


@dataclass(frozen=True)
class PredictionSet:
    """Predicted class indices for the test instances of one fold."""

    experiment: ExperimentKey
    partition: FoldAssignment
    predictions: Mapping[int, int] = field(default_factory=dict)

    def validate(self, dataset: Dataset | None = None) -> None:
        for index, predicted in self.predictions.items():
            if not 0 <= index < len(self.partition.roles):
                raise DataError(f"prediction for unknown instance {index}")
            if not self.partition.is_test(index):
                raise DataError(
                    f"prediction/partition mismatch: instance {index} "
                    f"is not a test instance of {self.partition.key}")
            if dataset is not None and not 0 <= predicted < dataset.n_classes:
                raise DataError(f"predicted class {predicted} out of range "
                                f"for instance {index}")


def aggregate_accuracy(prediction_sets: Sequence[PredictionSet],
                       dataset: Dataset) -> float:
    """Pooled accuracy over every test prediction of one experiment.

    All folds and repeated runs are pooled (micro-average): the result is
    correct predictions over total predictions, not a mean of per-fold
    accuracies.
    """
    if not prediction_sets:
        raise DataError("no predictions to aggregate")
    key = prediction_sets[0].experiment
    correct = total = 0
    for ps in prediction_sets:
        if ps.experiment != key:
            raise DataError("prediction sets mix experiments: "
                            f"{ps.experiment.label} vs {key.label}")
        ps.validate(dataset)
        for index, predicted in ps.predictions.items():
            total += 1
            if predicted == dataset.class_of(index):
                correct += 1
    if total == 0:
        raise DataError("no predictions to aggregate")
    return correct / total


def format_accuracy(value: float) -> str:
    """Render an accuracy fraction the way exports do: percent, 2 decimals."""
    return f"{value * 100.0:.2f}"

"""Numeric encodings of mixed-type datasets for the built-in learners."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import Dataset


def _column(dataset: Dataset, attr: int) -> np.ndarray:
    values = [row[attr] for row in dataset.instances]
    return np.array([np.nan if v is None else float(v) for v in values])


@dataclass
class DistanceEncoding:
    """Per-attribute columns used by the heterogeneous distance metric.

    Numeric attributes are min-max normalized to [0, 1] over the dataset's
    observed values; nominal attributes keep their category codes.  Missing
    values are NaN in both.
    """

    numeric: np.ndarray        # (n, n_numeric), normalized, NaN = missing
    nominal: np.ndarray        # (n, n_nominal), category codes, NaN = missing
    numeric_attrs: tuple[int, ...]
    nominal_attrs: tuple[int, ...]
    numeric_min: np.ndarray
    numeric_range: np.ndarray

    @property
    def n_attributes(self) -> int:
        return len(self.numeric_attrs) + len(self.nominal_attrs)

    def encode_rows(self, rows) -> tuple[np.ndarray, np.ndarray]:
        """Encode extra rows (e.g. synthetic points) with this encoding's
        normalization."""
        num = np.empty((len(rows), len(self.numeric_attrs)))
        nom = np.empty((len(rows), len(self.nominal_attrs)))
        for i, row in enumerate(rows):
            for j, a in enumerate(self.numeric_attrs):
                v = row[a]
                if v is None:
                    num[i, j] = np.nan
                elif self.numeric_range[j] > 0:
                    num[i, j] = (float(v) - self.numeric_min[j]) / self.numeric_range[j]
                else:
                    num[i, j] = 0.0
            for j, a in enumerate(self.nominal_attrs):
                v = row[a]
                nom[i, j] = np.nan if v is None else float(v)
        return num, nom


def distance_encoding(dataset: Dataset) -> DistanceEncoding:
    numeric_attrs = tuple(a for a in dataset.non_class_indices
                          if dataset.attributes[a].is_numeric)
    nominal_attrs = tuple(a for a in dataset.non_class_indices
                          if dataset.attributes[a].is_nominal)
    n = dataset.n_instances

    num = np.empty((n, len(numeric_attrs)))
    mins = np.zeros(len(numeric_attrs))
    ranges = np.zeros(len(numeric_attrs))
    for j, a in enumerate(numeric_attrs):
        col = _column(dataset, a)
        observed = col[~np.isnan(col)]
        lo = observed.min() if observed.size else 0.0
        hi = observed.max() if observed.size else 0.0
        mins[j], ranges[j] = lo, hi - lo
        if hi > lo:
            num[:, j] = (col - lo) / (hi - lo)
        else:
            num[:, j] = np.where(np.isnan(col), np.nan, 0.0)

    nom = np.empty((n, len(nominal_attrs)))
    for j, a in enumerate(nominal_attrs):
        nom[:, j] = _column(dataset, a)

    return DistanceEncoding(num, nom, numeric_attrs, nominal_attrs,
                            mins, ranges)


@dataclass(frozen=True)
class _NumericColumn:
    attribute: int
    low: float
    span: float
    fill: float           # imputation value in scaled space

    def apply(self, value) -> float:
        if value is None:
            return self.fill
        if self.span > 0:
            return (float(value) - self.low) / self.span
        return 0.0


@dataclass(frozen=True)
class _IndicatorColumn:
    attribute: int
    category: int | None   # None marks the missing-value indicator

    def apply(self, value) -> float:
        if self.category is None:
            return 1.0 if value is None else 0.0
        return 1.0 if value is not None and int(value) == self.category else 0.0


@dataclass
class FeatureEncoding:
    """Dense feature matrix for the linear and discriminant learners.

    Numeric attributes are min-max scaled to [0, 1] and mean-imputed;
    nominal attributes are one-hot encoded with an extra "missing" column
    when the attribute actually has missing values.  The per-column
    transforms are kept so extra rows (synthetic test points) can be
    encoded consistently.
    """

    matrix: np.ndarray                 # (n, n_features)
    labels: np.ndarray                 # (n,) class indices
    feature_names: tuple[str, ...]
    columns: tuple[_NumericColumn | _IndicatorColumn, ...]

    @property
    def n_features(self) -> int:
        return self.matrix.shape[1]

    def encode_rows(self, rows) -> np.ndarray:
        out = np.empty((len(rows), len(self.columns)))
        for i, row in enumerate(rows):
            for j, column in enumerate(self.columns):
                out[i, j] = column.apply(row[column.attribute])
        return out


def feature_encoding(dataset: Dataset) -> FeatureEncoding:
    columns: list[np.ndarray] = []
    transforms: list[_NumericColumn | _IndicatorColumn] = []
    names: list[str] = []
    for a in dataset.non_class_indices:
        spec = dataset.attributes[a]
        col = _column(dataset, a)
        missing = np.isnan(col)
        if spec.is_numeric:
            observed = col[~missing]
            if observed.size:
                lo, hi = float(observed.min()), float(observed.max())
                scaled = (col - lo) / (hi - lo) if hi > lo else col * 0.0
                fill = float(np.nanmean(scaled))
            else:
                lo, hi, scaled, fill = 0.0, 0.0, col * 0.0, 0.0
            columns.append(np.where(missing, fill, scaled))
            transforms.append(_NumericColumn(a, lo, hi - lo, fill))
            names.append(spec.name)
        else:
            for c, cat in enumerate(spec.categories):
                columns.append(np.where(missing, 0.0, (col == c) * 1.0))
                transforms.append(_IndicatorColumn(a, c))
                names.append(f"{spec.name}={cat}")
            if missing.any():
                columns.append(missing * 1.0)
                transforms.append(_IndicatorColumn(a, None))
                names.append(f"{spec.name}=?")
    if columns:
        matrix = np.column_stack(columns)
    else:
        matrix = np.zeros((dataset.n_instances, 0))
    labels = np.array(dataset.class_labels(), dtype=int)
    return FeatureEncoding(matrix, labels, tuple(names), tuple(transforms))

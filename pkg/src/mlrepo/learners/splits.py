"""Entropy-based split scoring shared by the stump and tree learners.

Instances with a missing value on the candidate attribute are left out of
the gain computation and the gain is scaled by the observed fraction, the
usual C4.5 convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..model import Dataset

_EPS = 1e-12


def entropy(counts) -> float:
    total = sum(counts)
    if total == 0:
        return 0.0
    h = 0.0
    for c in counts:
        if c:
            p = c / total
            h -= p * math.log2(p)
    return h


def class_histogram(dataset: Dataset, rows) -> list[int]:
    counts = [0] * dataset.n_classes
    for i in rows:
        counts[dataset.class_of(i)] += 1
    return counts


@dataclass(frozen=True)
class Split:
    """A scored candidate split of one attribute.

    ``threshold`` is set for numeric attributes (branches: <= and >);
    nominal attributes branch per observed category listed in
    ``categories``.  ``branches`` holds the observed row indices per
    branch; missing-valued rows are in ``unrouted``.
    """

    attribute: int
    gain: float
    gain_ratio: float
    threshold: float | None
    categories: tuple[int, ...] | None
    branches: tuple[tuple[int, ...], ...]
    unrouted: tuple[int, ...]


def _score(parent_counts, branch_counts, n_total: int) -> tuple[float, float]:
    n_obs = sum(sum(b) for b in branch_counts)
    if n_obs == 0:
        return 0.0, 0.0
    info = entropy(parent_counts)
    split_h = 0.0
    branch_info = 0.0
    for counts in branch_counts:
        size = sum(counts)
        if size:
            branch_info += size / n_obs * entropy(counts)
            split_h -= size / n_obs * math.log2(size / n_obs)
    gain = (n_obs / n_total) * (info - branch_info)
    ratio = gain / split_h if split_h > _EPS else 0.0
    return gain, ratio


def numeric_splits(dataset: Dataset, rows, attribute: int,
                   min_branch: int = 1) -> Split | None:
    """Best threshold split of a numeric attribute, or None when no
    admissible threshold exists.  Gain ties go to the lowest threshold."""
    observed = [(dataset.instances[i][attribute], i) for i in rows
                if dataset.instances[i][attribute] is not None]
    unrouted = tuple(i for i in rows
                     if dataset.instances[i][attribute] is None)
    if len(observed) < 2 * min_branch:
        return None
    observed.sort(key=lambda pair: (pair[0], pair[1]))
    values = [v for v, _ in observed]
    labels = [dataset.class_of(i) for _, i in observed]
    n_classes = dataset.n_classes
    parent = class_histogram(dataset, rows)

    left = [0] * n_classes
    right = [0] * n_classes
    for lab in labels:
        right[lab] += 1

    best: tuple[float, float, int] | None = None   # (-gain, threshold, cut)
    for cut in range(1, len(observed)):
        left[labels[cut - 1]] += 1
        right[labels[cut - 1]] -= 1
        if values[cut - 1] == values[cut]:
            continue
        if cut < min_branch or len(observed) - cut < min_branch:
            continue
        gain, _ = _score(parent, (left, right), len(rows))
        threshold = (values[cut - 1] + values[cut]) / 2.0
        key = (-gain, threshold, cut)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    gain, threshold, cut = -best[0], best[1], best[2]
    below = tuple(i for v, i in observed[:cut])
    above = tuple(i for v, i in observed[cut:])
    left_counts = class_histogram(dataset, below)
    right_counts = class_histogram(dataset, above)
    gain, ratio = _score(parent, (left_counts, right_counts), len(rows))
    return Split(attribute, gain, ratio, threshold, None,
                 (below, above), unrouted)


def nominal_split(dataset: Dataset, rows, attribute: int,
                  min_branch: int = 1) -> Split | None:
    """Multiway split over the observed categories of a nominal attribute."""
    by_cat: dict[int, list[int]] = {}
    unrouted = []
    for i in rows:
        v = dataset.instances[i][attribute]
        if v is None:
            unrouted.append(i)
        else:
            by_cat.setdefault(int(v), []).append(i)
    cats = sorted(by_cat)
    if len(cats) < 2:
        return None
    if any(len(by_cat[c]) < min_branch for c in cats):
        return None
    branches = tuple(tuple(by_cat[c]) for c in cats)
    parent = class_histogram(dataset, rows)
    counts = [class_histogram(dataset, b) for b in branches]
    gain, ratio = _score(parent, counts, len(rows))
    return Split(attribute, gain, ratio, None, tuple(cats), branches,
                 tuple(unrouted))


def best_split_of_attribute(dataset: Dataset, rows, attribute: int,
                            min_branch: int = 1) -> Split | None:
    if dataset.attributes[attribute].is_numeric:
        return numeric_splits(dataset, rows, attribute, min_branch)
    return nominal_split(dataset, rows, attribute, min_branch)


def information_gain(dataset: Dataset, rows, attribute: int) -> float:
    """Best achievable information gain of one attribute (0 when the
    attribute admits no split)."""
    split = best_split_of_attribute(dataset, rows, attribute)
    return split.gain if split is not None else 0.0


def majority_class(counts) -> int:
    """Majority class index; ties go to the lowest index."""
    best = 0
    for c in range(1, len(counts)):
        if counts[c] > counts[best]:
            best = c
    return best

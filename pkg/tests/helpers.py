"""Shared dataset builders and independent brute-force oracles.

The oracles here deliberately re-derive everything from the measure
definitions with plain Python loops, staying independent of the library's
vectorized implementation paths.
"""

from __future__ import annotations

import math
import random

from mlrepo.model import AttributeSpec, Dataset


def one_attribute_dataset(values, labels, n_classes=None,
                          name="fixture") -> Dataset:
    """One numeric attribute plus a nominal class."""
    n_classes = n_classes or (max(labels) + 1)
    attrs = [AttributeSpec("x"),
             AttributeSpec("class", tuple(f"c{i}" for i in range(n_classes)))]
    rows = [[float(v), int(c)] for v, c in zip(values, labels)]
    return Dataset.build(name, attrs, rows)


def matrix_dataset(matrix, labels, n_classes=None, name="fixture") -> Dataset:
    """Several numeric attributes plus a nominal class."""
    n_classes = n_classes or (max(labels) + 1)
    width = len(matrix[0])
    attrs = [AttributeSpec(f"x{j}") for j in range(width)]
    attrs.append(AttributeSpec("class",
                               tuple(f"c{i}" for i in range(n_classes))))
    rows = [[float(v) for v in row] + [int(c)]
            for row, c in zip(matrix, labels)]
    return Dataset.build(name, attrs, rows)


def random_dataset(seed: int, max_instances: int = 60, max_attrs: int = 5,
                   max_classes: int = 4, missing_rate: float = 0.08,
                   name=None) -> Dataset:
    """Seeded mixed-type dataset with every class present at least twice."""
    rng = random.Random(seed)
    n_classes = rng.randint(2, max_classes)
    n = rng.randint(max(6, 2 * n_classes), max_instances)
    n_attrs = rng.randint(1, max_attrs)
    attrs = []
    for j in range(n_attrs):
        if rng.random() < 0.3:
            n_cats = rng.randint(2, 4)
            attrs.append(AttributeSpec(f"a{j}",
                                       tuple(f"v{k}" for k in range(n_cats))))
        else:
            attrs.append(AttributeSpec(f"a{j}"))
    attrs.append(AttributeSpec("class",
                               tuple(f"c{k}" for k in range(n_classes))))

    labels = list(range(n_classes)) * 2
    labels += [rng.randrange(n_classes) for _ in range(n - len(labels))]
    rng.shuffle(labels)

    rows = []
    for i in range(n):
        row = []
        for spec in attrs[:-1]:
            if rng.random() < missing_rate:
                row.append(None)
            elif spec.is_nominal:
                row.append(rng.randrange(len(spec.categories)))
            else:
                center = labels[i] * rng.random() * 2.0
                row.append(round(rng.gauss(center, 1.5), 6))
        row.append(labels[i])
        rows.append(row)
    return Dataset.build(name or f"random{seed}", attrs, rows)


# ----------------------------------------------------------------- oracles

def brute_distance(dataset: Dataset, row_a, row_b, ranges) -> float:
    """Distance straight from the definition, one attribute at a time."""
    total = 0.0
    for a in dataset.non_class_indices:
        va, vb = row_a[a], row_b[a]
        if va is None or vb is None:
            d = 1.0
        elif dataset.attributes[a].is_nominal:
            d = 0.0 if int(va) == int(vb) else 1.0
        else:
            lo, hi = ranges[a]
            if hi > lo:
                d = abs((float(va) - lo) / (hi - lo)
                        - (float(vb) - lo) / (hi - lo))
            else:
                d = 0.0
        total += d * d
    return math.sqrt(total)


def attribute_ranges(dataset: Dataset) -> dict:
    ranges = {}
    for a in dataset.non_class_indices:
        if dataset.attributes[a].is_numeric:
            observed = [float(r[a]) for r in dataset.instances
                        if r[a] is not None]
            if observed:
                ranges[a] = (min(observed), max(observed))
            else:
                ranges[a] = (0.0, 0.0)
    return ranges


def brute_distance_matrix(dataset: Dataset):
    ranges = attribute_ranges(dataset)
    n = dataset.n_instances
    return [[brute_distance(dataset, dataset.instances[i],
                            dataset.instances[j], ranges)
             for j in range(n)] for i in range(n)]


def brute_loo_1nn_error(dataset: Dataset) -> float:
    d = brute_distance_matrix(dataset)
    n = dataset.n_instances
    wrong = 0
    for i in range(n):
        best = min((d[i][j], j) for j in range(n) if j != i)
        if dataset.class_of(best[1]) != dataset.class_of(i):
            wrong += 1
    return wrong / n


def brute_kdn(dataset: Dataset, k: int) -> list[float]:
    d = brute_distance_matrix(dataset)
    n = dataset.n_instances
    out = []
    for i in range(n):
        order = sorted((d[i][j], j) for j in range(n) if j != i)
        neighbors = [j for _, j in order[:k]]
        disagree = sum(dataset.class_of(j) != dataset.class_of(i)
                       for j in neighbors)
        out.append(disagree / k)
    return out


def kruskal_mst_weight(distances) -> float:
    """Independent MST oracle: Kruskal with union-find."""
    n = len(distances)
    edges = sorted((distances[i][j], i, j)
                   for i in range(n) for j in range(i + 1, n))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    total, used = 0.0, 0
    for w, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            total += w
            used += 1
            if used == n - 1:
                break
    return total


def fisher_two_loop(dataset: Dataset) -> float | None:
    """Direct re-derivation of the maximum Fisher discriminant ratio."""
    classes = sorted({dataset.class_of(i)
                      for i in range(dataset.n_instances)})
    counts = dataset.class_counts()
    n = dataset.n_instances
    best = None
    for a in dataset.non_class_indices:
        if dataset.attributes[a].is_nominal:
            continue
        stats = {}
        for c in classes:
            values = [float(dataset.instances[i][a])
                      for i in range(n)
                      if dataset.class_of(i) == c
                      and dataset.instances[i][a] is not None]
            if values:
                mean = sum(values) / len(values)
                var = sum((v - mean) ** 2 for v in values) / len(values)
                stats[c] = (mean, var)
        observed = [c for c in classes if c in stats]
        if len(observed) < 2:
            continue
        if len(observed) == 2:
            (m1, v1), (m2, v2) = stats[observed[0]], stats[observed[1]]
            numer, denom = (m1 - m2) ** 2, v1 + v2
        else:
            numer = denom = 0.0
            for x, ca in enumerate(observed):
                pa = counts[ca] / n
                denom += pa * stats[ca][1]
                for cb in observed[x + 1:]:
                    pb = counts[cb] / n
                    numer += pa * pb * (stats[ca][0] - stats[cb][0]) ** 2
        if denom <= 0:
            ratio = math.inf if numer > 0 else 0.0
        else:
            ratio = numer / denom
        best = ratio if best is None else max(best, ratio)
    return best


def class_entropy_oracle(dataset: Dataset) -> float:
    histogram: dict[int, int] = {}
    for i in range(dataset.n_instances):
        histogram[dataset.class_of(i)] = histogram.get(dataset.class_of(i),
                                                       0) + 1
    n = dataset.n_instances
    return -sum((c / n) * math.log2(c / n) for c in histogram.values())

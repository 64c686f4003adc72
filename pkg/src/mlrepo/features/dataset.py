"""Dataset-level meta-features.

Three families are computed: simple statistics (instance count, attribute
mix, missing share, outlier attributes, class entropy), geometric
complexity of the class boundary (feature overlap, linear separability,
neighbor structure, nonlinearity, covering spheres, points per dimension),
and landmarkers (accuracies of the cheap built-in classifiers).

Measures that are undefined for a dataset (no numeric attributes, a
degenerate linear model, no class with two instances, ...) come back as
``None`` and export as ``?``; :func:`compute_all` records the reason in
its ``notes``.

Conventions: population variances (divide by n) throughout; two-class
datasets use the plain Fisher ratio (mean gap squared over summed
variances) while three or more classes use the proportion-weighted
pairwise expansion; bounding-box overlap is summed over class pairs;
feature-efficiency measures average over class pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from ..errors import DataError
from ..model import Dataset, require_valid
from ..learners.crossval import stratified_folds
from ..learners.distance import (distances_to, loo_1nn_error,
                                 pairwise_distances)
from ..learners.encoding import distance_encoding, feature_encoding
from ..learners.lda import train_lda
from ..learners.linear import (LinearConfig, linear_error_distance,
                               one_vs_rest_predict, train_linear,
                               training_error)
from ..learners.stump import StumpMode, train_stump

TRIM_ALPHA = 0.05
OUTLIER_VARIANCE_RATIO = 0.7
SPHERE_MARGIN = 1e-9


@dataclass
class DatasetMetaFeatures:
    """The full dataset-level measure vector; None marks an undefined value."""

    n_examples: int
    n_attributes: int
    prop_symbolic: float | None = None
    prop_missing: float | None = None
    prop_outlier_attrs: float | None = None
    class_entropy: float | None = None
    f1: float | None = None
    f2: float | None = None
    f3: float | None = None
    f4: float | None = None
    l1: float | None = None
    l2: float | None = None
    l3: float | None = None
    n1: float | None = None
    n2: float | None = None
    n3: float | None = None
    n4: float | None = None
    t1: float | None = None
    t2: float | None = None
    lm_lda: float | None = None
    lm_1nn: float | None = None
    lm_stump_best: float | None = None
    lm_stump_random: float | None = None
    lm_stump_worst: float | None = None
    lm_stump_avg: float | None = None
    notes: dict[str, str] = field(default_factory=dict)


#: field name -> exported measure name, in export column order
MEASURE_NAMES: dict[str, str] = {
    "n_examples": "numInst",
    "n_attributes": "numAttr",
    "prop_symbolic": "propSymbolic",
    "prop_missing": "propMissing",
    "prop_outlier_attrs": "propOutlierAttrs",
    "class_entropy": "classEntropy",
    "f1": "F1", "f2": "F2", "f3": "F3", "f4": "F4",
    "l1": "L1", "l2": "L2", "l3": "L3",
    "n1": "N1", "n2": "N2", "n3": "N3", "n4": "N4",
    "t1": "T1", "t2": "T2",
    "lm_lda": "lmLDA",
    "lm_1nn": "lm1NN",
    "lm_stump_best": "lmStumpBest",
    "lm_stump_random": "lmStumpRandom",
    "lm_stump_worst": "lmStumpWorst",
    "lm_stump_avg": "lmStumpAvg",
}


def as_measure_dict(mf: DatasetMetaFeatures) -> dict[str, float | None]:
    """Measure-name keyed view letting the store and exports stay generic."""
    out: dict[str, float | None] = {}
    for f in fields(mf):
        if f.name == "notes":
            continue
        value = getattr(mf, f.name)
        if value is not None and not math.isfinite(value):
            value = None
        out[MEASURE_NAMES[f.name]] = value
    return out


def _numeric_attributes(dataset: Dataset) -> list[int]:
    return [a for a in dataset.non_class_indices
            if dataset.attributes[a].is_numeric]


def _observed_column(dataset: Dataset, attribute: int,
                     rows=None) -> np.ndarray:
    rows = range(dataset.n_instances) if rows is None else rows
    return np.array([float(dataset.instances[i][attribute]) for i in rows
                     if dataset.instances[i][attribute] is not None])


def _check_classes(dataset: Dataset) -> list[int]:
    present = [c for c, n in enumerate(dataset.class_counts()) if n > 0]
    if len(present) < 2:
        raise DataError("fewer than 2 classes present")
    return present


# ---------------------------------------------------------------- simple

def compute_simple(dataset: Dataset) -> dict[str, float | None]:
    """Instance count, attribute mix, missing share, outlier attributes,
    and class entropy in bits (unnormalized)."""
    require_valid(dataset)
    n = dataset.n_instances
    attrs = dataset.non_class_indices
    n_attrs = len(attrs)

    n_symbolic = sum(dataset.attributes[a].is_nominal for a in attrs)
    n_missing = sum(dataset.instances[i][a] is None
                    for i in range(n) for a in attrs)

    outliers = 0
    for a in _numeric_attributes(dataset):
        values = np.sort(_observed_column(dataset, a))
        if values.size < 2:
            continue
        var_all = float(values.var())
        if var_all <= 0.0:
            continue
        trim = int(math.floor(TRIM_ALPHA * values.size))
        trimmed = values[trim:values.size - trim]
        if trimmed.size == 0:
            continue
        if float(trimmed.var()) / var_all < OUTLIER_VARIANCE_RATIO:
            outliers += 1

    counts = dataset.class_counts()
    entropy = 0.0
    for c in counts:
        if c:
            p = c / n
            entropy -= p * math.log2(p)

    return {
        "n_examples": float(n),
        "prop_symbolic": n_symbolic / n_attrs if n_attrs else 0.0,
        "prop_missing": n_missing / (n * n_attrs) if n_attrs else 0.0,
        "prop_outlier_attrs": outliers / n_attrs if n_attrs else 0.0,
        "class_entropy": entropy,
    }


# --------------------------------------------------------------- overlap

def _class_stats(dataset: Dataset, attribute: int,
                 classes) -> dict[int, tuple[float, float, int]]:
    """Per class: (mean, population variance, observed count) of one
    numeric attribute."""
    stats = {}
    members: dict[int, list[float]] = {c: [] for c in classes}
    for i in range(dataset.n_instances):
        v = dataset.instances[i][attribute]
        c = dataset.class_of(i)
        if v is not None and c in members:
            members[c].append(float(v))
    for c, values in members.items():
        if values:
            arr = np.asarray(values)
            stats[c] = (float(arr.mean()), float(arr.var()), len(values))
    return stats


def _fisher_ratio(dataset: Dataset, attribute: int, classes) -> float | None:
    stats = _class_stats(dataset, attribute, classes)
    observed = [c for c in classes if c in stats]
    if len(observed) < 2:
        return None
    n = dataset.n_instances
    counts = dataset.class_counts()
    if len(observed) == 2:
        (m1, v1, _), (m2, v2, _) = stats[observed[0]], stats[observed[1]]
        denom = v1 + v2
        numer = (m1 - m2) ** 2
    else:
        numer = denom = 0.0
        for i, a in enumerate(observed):
            pa = counts[a] / n
            denom += pa * stats[a][1]
            for b in observed[i + 1:]:
                pb = counts[b] / n
                numer += pa * pb * (stats[a][0] - stats[b][0]) ** 2
    if denom <= 0.0:
        return math.inf if numer > 0.0 else 0.0
    return numer / denom


def _class_ranges(dataset: Dataset, attribute: int,
                  classes) -> dict[int, tuple[float, float]]:
    ranges = {}
    for c in classes:
        values = [float(dataset.instances[i][attribute])
                  for i in range(dataset.n_instances)
                  if dataset.class_of(i) == c
                  and dataset.instances[i][attribute] is not None]
        if values:
            ranges[c] = (min(values), max(values))
    return ranges


def _pair_overlap_ratio(range_a, range_b) -> float:
    lo = max(range_a[0], range_b[0])
    hi = min(range_a[1], range_b[1])
    span = max(range_a[1], range_b[1]) - min(range_a[0], range_b[0])
    if span <= 0.0:
        return 1.0     # both classes constant at the same point
    return max(0.0, hi - lo) / span


def _discriminated(dataset: Dataset, rows, attribute: int) -> list[int]:
    """Rows (of the two classes in ``rows``) falling outside the classes'
    overlap region on one attribute; missing values never discriminate."""
    classes = sorted({dataset.class_of(i) for i in rows})
    per_class: dict[int, list[float]] = {c: [] for c in classes}
    for i in rows:
        v = dataset.instances[i][attribute]
        if v is not None:
            per_class[dataset.class_of(i)].append(float(v))
    if any(not per_class[c] for c in classes):
        return []
    lo = max(min(per_class[c]) for c in classes)
    hi = min(max(per_class[c]) for c in classes)
    out = []
    for i in rows:
        v = dataset.instances[i][attribute]
        if v is not None and (float(v) < lo or float(v) > hi):
            out.append(i)
    return out


def compute_overlap(dataset: Dataset) -> dict[str, float | None]:
    """Feature-overlap measures F1-F4 over the numeric attributes."""
    require_valid(dataset)
    classes = _check_classes(dataset)
    numeric_attrs = [a for a in _numeric_attributes(dataset)
                     if _observed_column(dataset, a).size > 0]
    if not numeric_attrs:
        return {"f1": None, "f2": None, "f3": None, "f4": None}

    ratios = [r for a in numeric_attrs
              if (r := _fisher_ratio(dataset, a, classes)) is not None]
    f1 = max(ratios) if ratios else None

    pairs = [(a, b) for i, a in enumerate(classes) for b in classes[i + 1:]]

    f2 = 0.0
    for ca, cb in pairs:
        product = 1.0
        for a in numeric_attrs:
            ranges = _class_ranges(dataset, a, (ca, cb))
            if ca in ranges and cb in ranges:
                product *= _pair_overlap_ratio(ranges[ca], ranges[cb])
        f2 += product

    per_attr_f3 = []
    for a in numeric_attrs:
        total = 0.0
        for ca, cb in pairs:
            rows = [i for i in range(dataset.n_instances)
                    if dataset.class_of(i) in (ca, cb)]
            total += len(_discriminated(dataset, rows, a)) / len(rows)
        per_attr_f3.append(total / len(pairs))
    f3 = max(per_attr_f3)

    f4_total = 0.0
    for ca, cb in pairs:
        rows = [i for i in range(dataset.n_instances)
                if dataset.class_of(i) in (ca, cb)]
        remaining = list(rows)
        removed = 0
        while remaining and len({dataset.class_of(i) for i in remaining}) == 2:
            best: list[int] = []
            for a in numeric_attrs:
                hit = _discriminated(dataset, remaining, a)
                if len(hit) > len(best):
                    best = hit
            if not best:
                break
            removed += len(best)
            gone = set(best)
            remaining = [i for i in remaining if i not in gone]
        f4_total += removed / len(rows)
    f4 = f4_total / len(pairs)

    return {"f1": f1, "f2": f2, "f3": f3, "f4": f4}


# ---------------------------------------------------------- separability

def minimum_spanning_tree(distances: np.ndarray) -> list[tuple[int, int]]:
    """Prim's algorithm; equal-weight edges are taken in lexicographic
    endpoint order so the tree is deterministic."""
    n = distances.shape[0]
    if n == 0:
        return []
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best_w = distances[0].copy()
    best_parent = np.zeros(n, dtype=int)
    edges: list[tuple[int, int]] = []
    for _ in range(n - 1):
        chosen = -1
        chosen_key = None
        for v in range(n):
            if in_tree[v]:
                continue
            p = best_parent[v]
            key = (best_w[v], min(p, v), max(p, v))
            if chosen_key is None or key < chosen_key:
                chosen, chosen_key = v, key
        edges.append((int(best_parent[chosen]), chosen))
        in_tree[chosen] = True
        for u in range(n):
            if in_tree[u]:
                continue
            p = best_parent[u]
            old = (best_w[u], min(p, u), max(p, u))
            new = (distances[chosen, u], min(chosen, u), max(chosen, u))
            if new < old:
                best_w[u] = distances[chosen, u]
                best_parent[u] = chosen
    return edges


def boundary_fraction(dataset: Dataset,
                      distances: np.ndarray | None = None) -> float:
    """N1: fraction of instances touched by a cross-class MST edge."""
    d = pairwise_distances(dataset) if distances is None else distances
    labels = dataset.class_labels()
    on_boundary = set()
    for u, v in minimum_spanning_tree(d):
        if labels[u] != labels[v]:
            on_boundary.update((u, v))
    return len(on_boundary) / dataset.n_instances


def neighbor_distance_ratio(dataset: Dataset,
                            distances: np.ndarray | None = None) -> float:
    """N2: summed intra-class nearest distances over summed inter-class
    nearest distances.  An instance whose class has no second member
    contributes 0 to the numerator."""
    d = pairwise_distances(dataset) if distances is None else distances
    labels = np.array(dataset.class_labels())
    n = dataset.n_instances
    intra_sum = inter_sum = 0.0
    for i in range(n):
        same = (labels == labels[i])
        same[i] = False
        if same.any():
            intra_sum += d[i][same].min()
        other = labels != labels[i]
        inter_sum += d[i][other].min()
    if inter_sum == 0.0:
        return math.inf if intra_sum > 0.0 else 0.0
    return intra_sum / inter_sum


def _one_vs_rest_models(dataset: Dataset, classes, config, encoding):
    return [train_linear(dataset, c, config, encoding) for c in classes]


def compute_separability(dataset: Dataset,
                         config: LinearConfig = LinearConfig()
                         ) -> dict[str, float | None]:
    """Class-separability measures L1, L2, N1, N2, N3.

    L1 is set to None (with the linear measures' caveat) when the trained
    separator degenerates to a zero weight vector.
    """
    require_valid(dataset)
    classes = _check_classes(dataset)
    if dataset.n_instances < 2:
        raise DataError("separability needs at least 2 instances")

    encoding = feature_encoding(dataset)
    l1_values, l2_values = [], []
    l1_defined = True
    for c in classes:
        model = train_linear(dataset, c, config, encoding)
        l2_values.append(training_error(model, dataset, encoding))
        try:
            l1_values.append(linear_error_distance(model, dataset, encoding))
        except DataError:
            l1_defined = False

    dist_enc = distance_encoding(dataset)
    distances = pairwise_distances(dataset, dist_enc)
    return {
        "l1": sum(l1_values) / len(l1_values) if l1_defined else None,
        "l2": sum(l2_values) / len(l2_values),
        "n1": boundary_fraction(dataset, distances),
        "n2": neighbor_distance_ratio(dataset, distances),
        "n3": loo_1nn_error(dataset, dist_enc),
    }


# -------------------------------------------------------------- geometry

def interpolated_test_set(dataset: Dataset, rng: np.random.Generator
                          ) -> tuple[list[tuple], list[int]]:
    """Synthetic instances by linear interpolation between random same-class
    pairs; nominal and missing values copy from the nearer parent."""
    by_class: dict[int, list[int]] = {}
    for i in range(dataset.n_instances):
        by_class.setdefault(dataset.class_of(i), []).append(i)
    rows: list[tuple] = []
    labels: list[int] = []
    for c in sorted(by_class):
        members = by_class[c]
        if len(members) < 2:
            continue
        for _ in range(len(members)):
            i, j = rng.choice(len(members), size=2, replace=False)
            parent_a = dataset.instances[members[int(i)]]
            parent_b = dataset.instances[members[int(j)]]
            alpha = float(rng.random())
            row = []
            for a, spec in enumerate(dataset.attributes):
                if a == dataset.class_index:
                    row.append(c)
                    continue
                va, vb = parent_a[a], parent_b[a]
                if spec.is_numeric and va is not None and vb is not None:
                    row.append((1.0 - alpha) * float(va) + alpha * float(vb))
                else:
                    row.append(va if alpha <= 0.5 else vb)
            rows.append(tuple(row))
            labels.append(c)
    return rows, labels


def covering_sphere_fraction(dataset: Dataset,
                             distances: np.ndarray | None = None) -> float:
    """T1: grow one sphere per instance until it would touch another class,
    keep only spheres whose covered set no other sphere subsumes."""
    d = pairwise_distances(dataset) if distances is None else distances
    labels = np.array(dataset.class_labels())
    n = dataset.n_instances
    covered = np.zeros((n, n), dtype=bool)
    for i in range(n):
        enemies = labels != labels[i]
        radius = d[i][enemies].min() - SPHERE_MARGIN if enemies.any() else math.inf
        covered[i] = d[i] <= radius
    kept = 0
    for i in range(n):
        subsumed = False
        for j in range(n):
            if j == i:
                continue
            if not (covered[i] & ~covered[j]).any():
                if (covered[j] & ~covered[i]).any() or j < i:
                    subsumed = True
                    break
        if not subsumed:
            kept += 1
    return kept / n


def compute_geometry(dataset: Dataset, rng_seed: int = 0,
                     config: LinearConfig = LinearConfig()
                     ) -> dict[str, float | None]:
    """Nonlinearity (L3, N4), covering spheres (T1), points per dimension
    (T2).  L3/N4 are None when no class has two instances to interpolate."""
    require_valid(dataset)
    classes = _check_classes(dataset)
    n_attrs = len(dataset.non_class_indices)

    distances = pairwise_distances(dataset)
    out: dict[str, float | None] = {
        "t1": covering_sphere_fraction(dataset, distances),
        "t2": dataset.n_instances / n_attrs if n_attrs else None,
    }

    rng = np.random.default_rng(rng_seed)
    rows, labels = interpolated_test_set(dataset, rng)
    if not rows:
        out["l3"] = None
        out["n4"] = None
        return out

    encoding = feature_encoding(dataset)
    actual = np.array(labels)
    try:
        models = _one_vs_rest_models(dataset, classes, config, encoding)
        predicted = np.array([classes[k] for k in
                              one_vs_rest_predict(models,
                                                  encoding.encode_rows(rows))])
        out["l3"] = float(np.mean(predicted != actual))
    except DataError:
        out["l3"] = None

    test_d = distances_to(dataset, rows)
    nearest = np.argsort(test_d, axis=1, kind="stable")[:, 0]
    train_labels = np.array(dataset.class_labels())
    out["n4"] = float(np.mean(train_labels[nearest] != actual))
    return out


# ----------------------------------------------------------- landmarkers

def compute_landmarkers(dataset: Dataset, n_folds: int = 10,
                        n3: float | None = None) -> dict[str, float | None]:
    """Accuracies of the cheap classifiers; the 1-NN landmarker is one
    minus the leave-one-out error, reusing ``n3`` when provided."""
    require_valid(dataset)
    _check_classes(dataset)
    if n3 is None:
        n3 = loo_1nn_error(dataset)
    out: dict[str, float | None] = {"lm_1nn": 1.0 - n3}
    try:
        out["lm_lda"] = train_lda(dataset, n_folds)[1]
    except DataError:
        out["lm_lda"] = None
    for mode, name in ((StumpMode.BEST, "lm_stump_best"),
                       (StumpMode.RANDOM, "lm_stump_random"),
                       (StumpMode.WORST, "lm_stump_worst"),
                       (StumpMode.AVERAGE, "lm_stump_avg")):
        try:
            out[name] = train_stump(dataset, mode, seed=0,
                                    n_folds=n_folds).cv_accuracy
        except DataError:
            out[name] = None
    return out


# ------------------------------------------------------------------ all

def compute_all(dataset: Dataset, seed: int = 0, n_folds: int = 10,
                config: LinearConfig = LinearConfig()) -> DatasetMetaFeatures:
    """Every dataset-level measure; failed groups become None fields with
    the failure reason in ``notes`` instead of aborting the run."""
    require_valid(dataset)
    mf = DatasetMetaFeatures(n_examples=dataset.n_instances,
                             n_attributes=len(dataset.non_class_indices))

    def apply(group: str, compute) -> None:
        try:
            for key, value in compute().items():
                if key == "n_examples":
                    continue
                setattr(mf, key, value)
        except DataError as err:
            mf.notes[group] = str(err)

    apply("simple", lambda: compute_simple(dataset))
    apply("overlap", lambda: compute_overlap(dataset))
    apply("separability", lambda: compute_separability(dataset, config))
    apply("geometry", lambda: compute_geometry(dataset, seed, config))
    apply("landmarkers", lambda: compute_landmarkers(dataset, n_folds, mf.n3))

    all_missing = [dataset.attributes[a].name
                   for a in _numeric_attributes(dataset)
                   if _observed_column(dataset, a).size == 0]
    if all_missing:
        mf.notes["excluded_attributes"] = (
            "all-missing, excluded from overlap measures: "
            + ", ".join(all_missing))
    return mf

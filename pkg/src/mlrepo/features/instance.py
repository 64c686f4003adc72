"""Per-instance hardness measures and their dataset-level averages.

Eight measures per instance: disagreeing-neighbor fraction (kDN), disjunct
size and tree depth from an unpruned tree, disjunct class percentage and
tree depth from a pruned tree, class likelihood, minority value, and class
balance.  Exported column names follow the repository's table format:
kAN, DS, DCP, TDU, TDP, CL, MV, CB.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..errors import DataError
from ..model import Dataset, require_valid
from ..learners.bayes import fit_class_conditionals
from ..learners.distance import nearest_neighbor_indices, pairwise_distances
from ..learners.tree import train_tree

DEFAULT_K = 5


@dataclass(frozen=True)
class InstanceHardnessVector:
    kdn: float
    disjunct_size: float
    disjunct_class_pct: float
    tree_depth_unpruned: float
    tree_depth_pruned: float
    class_likelihood: float
    minority_value: float
    class_balance: float


#: field name -> exported measure name, in export column order
HARDNESS_NAMES: dict[str, str] = {
    "kdn": "kAN",
    "disjunct_size": "DS",
    "disjunct_class_pct": "DCP",
    "tree_depth_unpruned": "TDU",
    "tree_depth_pruned": "TDP",
    "class_likelihood": "CL",
    "minority_value": "MV",
    "class_balance": "CB",
}


def compute_kdn(dataset: Dataset, k: int = DEFAULT_K) -> list[float]:
    """Fraction of each instance's k nearest neighbors with another class
    (ties to the lowest instance index)."""
    require_valid(dataset)
    n = dataset.n_instances
    if not 1 <= k < n:
        raise DataError(f"kDN needs 1 <= k < n, got k={k}, n={n}")
    distances = pairwise_distances(dataset)
    neighbors = nearest_neighbor_indices(distances, k)
    labels = np.array(dataset.class_labels())
    disagree = labels[neighbors] != labels[:, None]
    return [float(v) for v in disagree.mean(axis=1)]


def compute_disjunct_measures(dataset: Dataset) -> dict[str, list[float]]:
    """Disjunct size and leaf depth (unpruned tree), disjunct class
    percentage and leaf depth (pruned tree)."""
    require_valid(dataset)
    unpruned = train_tree(dataset, pruned=False)
    pruned = train_tree(dataset, pruned=True)
    largest = max(leaf.size for leaf in unpruned.leaves())

    disjunct_size, depth_unpruned = [], []
    disjunct_class_pct, depth_pruned = [], []
    for i in range(dataset.n_instances):
        leaf = unpruned.leaf_of[i]
        disjunct_size.append(leaf.size / largest)
        depth_unpruned.append(float(leaf.depth))
        leaf = pruned.leaf_of[i]
        disjunct_class_pct.append(
            leaf.class_counts[dataset.class_of(i)] / leaf.size)
        depth_pruned.append(float(leaf.depth))
    return {
        "disjunct_size": disjunct_size,
        "tree_depth_unpruned": depth_unpruned,
        "disjunct_class_pct": disjunct_class_pct,
        "tree_depth_pruned": depth_pruned,
    }


def compute_likelihood(dataset: Dataset) -> list[float]:
    """Product over attributes of p(value | instance's class); numeric
    densities are capped at 1 and missing values contribute 1."""
    require_valid(dataset)
    model = fit_class_conditionals(dataset)
    out = []
    for i in range(dataset.n_instances):
        c = dataset.class_of(i)
        product = 1.0
        for a in dataset.non_class_indices:
            product *= min(1.0, model.factor(c, a, dataset.instances[i][a]))
        out.append(product)
    return out


def compute_skew(dataset: Dataset) -> dict[str, list[float]]:
    """Minority value (class size over majority size) and class balance
    (class share minus the balanced share 1/C)."""
    require_valid(dataset)
    counts = dataset.class_counts()
    majority = max(counts)
    n, n_classes = dataset.n_instances, dataset.n_classes
    mv, cb = [], []
    for i in range(dataset.n_instances):
        count = counts[dataset.class_of(i)]
        mv.append(count / majority)
        cb.append(count / n - 1.0 / n_classes)
    return {"minority_value": mv, "class_balance": cb}


def compute_hardness(dataset: Dataset,
                     k: int = DEFAULT_K) -> list[InstanceHardnessVector]:
    """All eight measures for every instance."""
    kdn = compute_kdn(dataset, k)
    disjunct = compute_disjunct_measures(dataset)
    likelihood = compute_likelihood(dataset)
    skew = compute_skew(dataset)
    return [
        InstanceHardnessVector(
            kdn=kdn[i],
            disjunct_size=disjunct["disjunct_size"][i],
            disjunct_class_pct=disjunct["disjunct_class_pct"][i],
            tree_depth_unpruned=disjunct["tree_depth_unpruned"][i],
            tree_depth_pruned=disjunct["tree_depth_pruned"][i],
            class_likelihood=likelihood[i],
            minority_value=skew["minority_value"][i],
            class_balance=skew["class_balance"][i],
        )
        for i in range(dataset.n_instances)
    ]


def as_hardness_dict(vector: InstanceHardnessVector) -> dict[str, float]:
    return {HARDNESS_NAMES[f.name]: getattr(vector, f.name)
            for f in fields(vector)}


def aggregate_hardness(vectors: list[InstanceHardnessVector]
                       ) -> dict[str, float]:
    """Arithmetic mean of each measure, keyed by exported name."""
    if not vectors:
        raise DataError("nothing to aggregate")
    out = {}
    for f in fields(InstanceHardnessVector):
        values = [getattr(v, f.name) for v in vectors]
        out[HARDNESS_NAMES[f.name]] = sum(values) / len(values)
    return out

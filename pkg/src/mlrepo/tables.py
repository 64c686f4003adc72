"""ARFF exports of the six meta-data set table shapes.

Every export sorts its rows and columns so identical stores produce
byte-identical files.  Accuracy cells render as percentages with two
decimals (``96.80``); unknown cells emit ``?``.
"""

from __future__ import annotations

import math
import re

from .arff import DocCell, write_meta_table
from .errors import NotFoundError
from .features.dataset import MEASURE_NAMES
from .features.instance import HARDNESS_NAMES
from .model import aggregate_accuracy, format_accuracy
from .store import (DATASET_METAFEATURES_KEY, INSTANCE_METAFEATURES_KEY,
                    TRAINING_SETS, Document, DocumentStore)

FOLD_KEY_COLUMN = "toolkit_seed_numFolds_fold"

_MEASURE_ORDER = list(MEASURE_NAMES.values()) + list(HARDNESS_NAMES.values())


def _cell(value) -> DocCell:
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return None if not math.isfinite(value) else float(value)
    return str(value)


def export_algorithm_table(store: DocumentStore) -> str:
    """Table of stored algorithm settings: LA_seed, Toolkit, Hyperparameters."""
    rows = []
    for doc in store.algorithm_documents():
        rows.append([doc.key, doc.body["toolkit"],
                     doc.body["hyperparameters"]])
    return write_meta_table(["LA_seed", "Toolkit", "Hyperparameters"], rows,
                            "algorithms")


def _algorithm_documents(store: DocumentStore,
                         algorithm: str) -> list[Document]:
    docs = [doc for doc in store.algorithm_documents()
            if doc.body["algorithm"] == algorithm]
    if not docs:
        raise NotFoundError(f"unknown algorithm '{algorithm}'")
    return docs


def _param_columns(docs: list[Document]) -> list[str]:
    """Normalized parameter names in first-document order, extended by
    later documents."""
    order: list[str] = []
    for doc in docs:
        for name in doc.body["param_order"]:
            if name not in order:
                order.append(name)
    return order


def export_hyperparameter_mapping(store: DocumentStore,
                                  algorithm: str) -> str:
    """Cross-toolkit flag map of one algorithm: one row per toolkit,
    one column per normalized parameter, ``?`` where a toolkit lacks it."""
    docs = _algorithm_documents(store, algorithm)
    params = _param_columns(docs)
    flags_by_toolkit: dict[str, dict[str, str]] = {}
    for doc in docs:
        merged = flags_by_toolkit.setdefault(doc.body["toolkit"], {})
        for name, flag in doc.body["param_flags"].items():
            merged.setdefault(name, flag)
    rows = []
    for toolkit in sorted(flags_by_toolkit):
        flags = flags_by_toolkit[toolkit]
        row: list[DocCell] = [toolkit]
        for name in params:
            flag = flags.get(name)
            row.append(None if flag in (None, "?") else flag)
        rows.append(row)
    return write_meta_table(["toolkit"] + params, rows,
                            f"hyperparameters_{algorithm}")


def _fold_sort_key(key: str):
    m = re.match(r"^(.+)_(-?\d+)_(\d+)_(\d+)$", key)
    if m is None:
        return (key, 0, 0, 0)
    return (m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4)))


def export_fold_table(store: DocumentStore, dataset_name: str) -> str:
    """Training-role table: one row per stored fold, one column per
    instance; ``?`` marks test instances, 0 filtered, weights training."""
    dataset = store.get_dataset(dataset_name)
    keyed = []
    for doc in store.query(TRAINING_SETS):
        roles = doc.body["datasets"].get(dataset_name)
        if roles is not None:
            keyed.append((doc.key, roles))
    keyed.sort(key=lambda pair: _fold_sort_key(pair[0]))
    headers = [FOLD_KEY_COLUMN] + [str(i + 1)
                                   for i in range(dataset.n_instances)]
    rows = []
    for key, roles in keyed:
        row: list[DocCell] = [key]
        row.extend(None if r == "?" else float(r) for r in roles)
        rows.append(row)
    return write_meta_table(headers, rows, f"folds_{dataset_name}")


def _hardness_columns(instance_doc: Document) -> list[str]:
    present: set[str] = set()
    for values in instance_doc.body.values():
        present.update(values)
    ordered = [name for name in HARDNESS_NAMES.values() if name in present]
    ordered += sorted(present - set(ordered))
    return ordered


def export_instance_level(store: DocumentStore, dataset_name: str) -> str:
    """Instance-level meta-data set: instance number, hardness measures,
    actual class, one prediction column per stored experiment
    (``LA_hpSeed/partitionSeed``)."""
    dataset = store.get_dataset(dataset_name)
    try:
        instance_doc = store.get(dataset_name, INSTANCE_METAFEATURES_KEY)
    except NotFoundError:
        raise NotFoundError(
            f"no meta-features stored for dataset {dataset_name}") from None
    experiments = store.experiment_documents(dataset_name)
    if not experiments:
        raise NotFoundError(f"no experiments stored for {dataset_name}")

    measures = _hardness_columns(instance_doc)
    headers = ["instance"] + measures + ["act"]
    headers += [doc.key for doc in experiments]

    predictions_by_doc = []
    for doc in experiments:
        merged: dict[str, int] = {}
        for fold_map in doc.body["folds"].values():
            merged.update(fold_map)
        predictions_by_doc.append(merged)

    rows = []
    for index in range(dataset.n_instances):
        number = str(index + 1)
        vector = instance_doc.body.get(number, {})
        row: list[DocCell] = [float(index + 1)]
        row.extend(_cell(vector.get(name)) for name in measures)
        row.append(float(dataset.class_of(index) + 1))
        for merged in predictions_by_doc:
            predicted = merged.get(number)
            row.append(None if predicted is None else float(predicted))
        rows.append(row)
    return write_meta_table(headers, rows, f"instance_level_{dataset_name}")


def _accuracy_by_label(store: DocumentStore,
                       dataset_name: str) -> dict[str, float]:
    """Pooled accuracy per experiment label (LA_seed) over every stored
    partition run of one dataset."""
    dataset = store.get_dataset(dataset_name)
    sets_by_label: dict[str, list] = {}
    for doc in store.experiment_documents(dataset_name):
        label = doc.key.split("/")[0]
        sets_by_label.setdefault(label, []).extend(
            store.prediction_sets(dataset_name, doc))
    return {label: aggregate_accuracy(sets, dataset)
            for label, sets in sets_by_label.items() if sets}


def _measure_columns(bodies: list[dict]) -> list[str]:
    present: set[str] = set()
    for body in bodies:
        present.update(body)
    ordered = [name for name in _MEASURE_ORDER if name in present]
    ordered += sorted(present - set(ordered))
    return ordered


def export_dataset_level(store: DocumentStore) -> str:
    """Dataset-level meta-data set: one row per dataset with its measures
    followed by one pooled-accuracy column per experiment label."""
    datasets = store.list_datasets()
    bodies: dict[str, dict] = {}
    for name in datasets:
        try:
            bodies[name] = store.get(name, DATASET_METAFEATURES_KEY).body
        except NotFoundError:
            bodies[name] = {}
    if not any(bodies.values()):
        raise NotFoundError("no meta-features stored")

    measures = _measure_columns(list(bodies.values()))
    accuracy: dict[str, dict[str, float]] = {
        name: _accuracy_by_label(store, name) for name in datasets}
    labels = sorted({label for by_label in accuracy.values()
                     for label in by_label})

    headers = ["dataset"] + measures + labels
    rows = []
    for name in datasets:
        row: list[DocCell] = [name]
        row.extend(_cell(bodies[name].get(m)) for m in measures)
        for label in labels:
            value = accuracy[name].get(label)
            row.append(None if value is None else format_accuracy(value))
        rows.append(row)
    return write_meta_table(headers, rows, "dataset_level")


def export_per_algorithm(store: DocumentStore, algorithm: str) -> str:
    """Per-algorithm meta-data set: one row per (dataset, toolkit,
    hyperparameter setting) with dataset measures, toolkit, normalized
    hyperparameter values, and the pooled accuracy."""
    docs = _algorithm_documents(store, algorithm)
    docs.sort(key=lambda d: (d.body["toolkit"], d.body["hyperparameter_seed"]))
    params = _param_columns(docs)

    datasets = store.list_datasets()
    bodies: dict[str, dict] = {}
    for name in datasets:
        try:
            bodies[name] = store.get(name, DATASET_METAFEATURES_KEY).body
        except NotFoundError:
            bodies[name] = {}
    measure_names = _measure_columns(list(bodies.values()))

    rows = []
    for name in datasets:
        accuracy = _accuracy_by_label(store, name)
        for doc in docs:
            value = accuracy.get(doc.key)
            if value is None:
                continue
            row: list[DocCell] = [name]
            row.extend(_cell(bodies[name].get(m)) for m in measure_names)
            row.append(doc.body["toolkit"])
            row.extend(_cell(doc.body["param_values"].get(p)) for p in params)
            row.append(format_accuracy(value))
            rows.append(row)

    headers = (["dataset"] + measure_names + ["toolkit"] + params + ["acc"])
    return write_meta_table(headers, rows, f"algorithm_level_{algorithm}")

"""Embedded, versioned document store for experiment results.

One collection per dataset holds the dataset itself, its experiment
documents (keyed ``LA_hpSeed/partitionSeed``, bodies shaped
``fold -> {instance: prediction}``), and its meta-feature documents.
Two shared collections hold training-set assignments (keyed by canonical
partition key) and learning-algorithm definitions (keyed ``LA_seed``).

On disk: one UTF-8 canonical-JSON file per document (sorted keys, no
insignificant whitespace, newline terminated) under
``root/collections/<collection>/<key>.json``; snapshots hard-link document
bytes into a content-addressed ``objects/`` pool with one manifest per
revision under ``revisions/<r>/``; ``MANIFEST.json`` lists revisions and
collections.  Writes are temp-file-then-rename, so an interrupted put
either fully appears or not at all.  Serialized instance numbers and class
values are 1-based; the in-memory API stays 0-based.

Puts are idempotent on identical bodies; replacing a document body
requires ``force=True``.  Mutation takes an exclusive lock file; reads
never lock.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import urllib.parse
from dataclasses import dataclass
from typing import Any, Iterable

from filelock import FileLock

from . import arff
from .errors import DataError, NotFoundError, StoreConflictError, StoreError
from .model import (Dataset, ExperimentKey, FixedSplit, FoldAssignment,
                    KFold, PercentSplit, PredictionSet, require_valid)

TRAINING_SETS = "training_sets"
ALGORITHMS = "algorithms"
RESERVED_COLLECTIONS = frozenset({TRAINING_SETS, ALGORITHMS})

DATASET_KEY = "dataset"
DATASET_METAFEATURES_KEY = "meta_features"
INSTANCE_METAFEATURES_KEY = "instance_meta_features"
RESERVED_KEYS = frozenset({DATASET_KEY, DATASET_METAFEATURES_KEY,
                           INSTANCE_METAFEATURES_KEY})

DATASET_LEVEL = "dataset"
INSTANCE_LEVEL = "instance"


def canonical_json(value: Any) -> bytes:
    return (json.dumps(value, ensure_ascii=False, sort_keys=True,
                       separators=(",", ":")) + "\n").encode("utf-8")


def _atomic_write(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as handle:
        handle.write(data)
    os.replace(tmp, path)


def _encode_name(name: str) -> str:
    return urllib.parse.quote(name, safe="")


def _decode_name(name: str) -> str:
    return urllib.parse.unquote(name)


@dataclass(frozen=True)
class Document:
    key: str
    body: Any

    @property
    def content_id(self) -> str:
        return hashlib.sha256(
            canonical_json({"key": self.key, "body": self.body})).hexdigest()


def roles_to_wire(roles) -> list:
    out = []
    for role in roles:
        if role is None:
            out.append("?")
        elif role == 0.0:
            out.append(0)
        elif role == 1.0:
            out.append(1)
        else:
            out.append(role)
    return out


def roles_from_wire(values) -> tuple:
    out = []
    for value in values:
        if value == "?":
            out.append(None)
        else:
            out.append(float(value))
    return tuple(out)


def scheme_to_wire(scheme) -> dict:
    if isinstance(scheme, KFold):
        return {"kind": "kfold", "num_folds": scheme.num_folds}
    if isinstance(scheme, PercentSplit):
        return {"kind": "percent_split", "test_percent": scheme.test_percent}
    return {"kind": "fixed_split"}


class DocumentStore:
    """Filesystem-backed collections of keyed JSON documents with integer
    snapshot revisions."""

    def __init__(self, root: str):
        self.root = os.path.abspath(root)
        self._collections_dir = os.path.join(self.root, "collections")
        self._objects_dir = os.path.join(self.root, "objects")
        self._revisions_dir = os.path.join(self.root, "revisions")
        for directory in (self.root, self._collections_dir,
                          self._objects_dir, self._revisions_dir):
            os.makedirs(directory, exist_ok=True)
        self._lock = FileLock(os.path.join(self.root, ".lock"))
        self._dataset_cache: dict[str, tuple[str, Dataset]] = {}
        if not os.path.exists(self._manifest_path):
            with self._lock:
                if not os.path.exists(self._manifest_path):
                    self._write_manifest()

    # ------------------------------------------------------------ basics

    @property
    def _manifest_path(self) -> str:
        return os.path.join(self.root, "MANIFEST.json")

    def _collection_dir(self, collection: str) -> str:
        return os.path.join(self._collections_dir, _encode_name(collection))

    def _document_path(self, collection: str, key: str) -> str:
        return os.path.join(self._collection_dir(collection),
                            f"{_encode_name(key)}.json")

    def list_collections(self) -> list[str]:
        if not os.path.isdir(self._collections_dir):
            return []
        return sorted(_decode_name(entry)
                      for entry in os.listdir(self._collections_dir))

    def list_keys(self, collection: str) -> list[str]:
        directory = self._collection_dir(collection)
        if not os.path.isdir(directory):
            return []
        keys = []
        for entry in os.listdir(directory):
            if entry.endswith(".json") and ".tmp." not in entry:
                keys.append(_decode_name(entry[:-len(".json")]))
        return sorted(keys)

    def _write_manifest(self) -> None:
        manifest = {
            "revisions": self.list_revisions(),
            "collections": {name: self.list_keys(name)
                            for name in self.list_collections()},
        }
        _atomic_write(self._manifest_path, canonical_json(manifest))

    def put(self, collection: str, key: str, body: Any,
            force: bool = False) -> str:
        """Write one document; idempotent on identical bodies.  Returns the
        document's content id."""
        document = Document(key, body)
        data = canonical_json({"key": key, "body": body})
        with self._lock:
            path = self._document_path(collection, key)
            if os.path.exists(path):
                with open(path, "rb") as handle:
                    existing = handle.read()
                if existing == data:
                    return document.content_id
                if not force:
                    raise StoreConflictError(
                        f"conflicting document {collection}/{key}: "
                        "a different body is already stored")
            os.makedirs(self._collection_dir(collection), exist_ok=True)
            _atomic_write(path, data)
            self._write_manifest()
        return document.content_id

    def get(self, collection: str, key: str,
            revision: int | None = None) -> Document:
        if revision is not None:
            return self.read_at(revision, collection, key)
        path = self._document_path(collection, key)
        if not os.path.exists(path):
            raise NotFoundError(f"no document {collection}/{key}")
        return self._read_file(path)

    def exists(self, collection: str, key: str) -> bool:
        return os.path.exists(self._document_path(collection, key))

    @staticmethod
    def _read_file(path: str) -> Document:
        with open(path, "rb") as handle:
            obj = json.loads(handle.read().decode("utf-8"))
        return Document(obj["key"], obj["body"])

    def query(self, collection: str, key_prefix: str = "",
              revision: int | None = None) -> list[Document]:
        """Lexicographic prefix scan; unknown collections yield []."""
        if revision is None:
            keys = [k for k in self.list_keys(collection)
                    if k.startswith(key_prefix)]
            return [self.get(collection, k) for k in keys]
        manifest = self._revision_manifest(revision)
        by_key = manifest["collections"].get(collection, {})
        return [self._read_object(by_key[k])
                for k in sorted(by_key) if k.startswith(key_prefix)]

    # --------------------------------------------------------- revisions

    def list_revisions(self) -> list[int]:
        if not os.path.isdir(self._revisions_dir):
            return []
        return sorted(int(entry) for entry in os.listdir(self._revisions_dir)
                      if entry.isdigit())

    def snapshot(self) -> int:
        """Freeze the current head under a new monotonically increasing
        revision id; unchanged documents share content-addressed storage."""
        with self._lock:
            revisions = self.list_revisions()
            revision = (revisions[-1] + 1) if revisions else 1
            collections: dict[str, dict[str, str]] = {}
            for name in self.list_collections():
                by_key = {}
                for key in self.list_keys(name):
                    path = self._document_path(name, key)
                    with open(path, "rb") as handle:
                        data = handle.read()
                    sha = hashlib.sha256(data).hexdigest()
                    object_path = os.path.join(self._objects_dir,
                                               f"{sha}.json")
                    if not os.path.exists(object_path):
                        try:
                            os.link(path, object_path)
                        except OSError:
                            shutil.copyfile(path, object_path)
                    by_key[key] = sha
                collections[name] = by_key
            revision_dir = os.path.join(self._revisions_dir, str(revision))
            os.makedirs(revision_dir, exist_ok=True)
            _atomic_write(os.path.join(revision_dir, "manifest.json"),
                          canonical_json({"revision": revision,
                                          "collections": collections}))
            self._write_manifest()
        return revision

    def _revision_manifest(self, revision: int) -> dict:
        path = os.path.join(self._revisions_dir, str(revision),
                            "manifest.json")
        if not os.path.exists(path):
            raise NotFoundError(f"unknown revision {revision}")
        with open(path, "rb") as handle:
            return json.loads(handle.read().decode("utf-8"))

    def _read_object(self, sha: str) -> Document:
        path = os.path.join(self._objects_dir, f"{sha}.json")
        if not os.path.exists(path):
            raise StoreError(f"missing object {sha}")
        return self._read_file(path)

    def read_at(self, revision: int, collection: str, key: str) -> Document:
        """Read a document exactly as frozen by ``snapshot``."""
        manifest = self._revision_manifest(revision)
        by_key = manifest["collections"].get(collection)
        if by_key is None or key not in by_key:
            raise NotFoundError(
                f"no document {collection}/{key} at revision {revision}")
        return self._read_object(by_key[key])

    # ---------------------------------------------------- dataset layer

    def put_dataset(self, dataset: Dataset, force: bool = False) -> str:
        require_valid(dataset)
        if dataset.name in RESERVED_COLLECTIONS:
            raise DataError(f"dataset name '{dataset.name}' is reserved")
        body = {"name": dataset.name, "arff": arff.write_arff(dataset)}
        return self.put(dataset.name, DATASET_KEY, body, force)

    def has_dataset(self, name: str) -> bool:
        return self.exists(name, DATASET_KEY)

    def get_dataset(self, name: str) -> Dataset:
        try:
            document = self.get(name, DATASET_KEY)
        except NotFoundError:
            raise NotFoundError(f"dataset not registered: {name}") from None
        text = document.body["arff"]
        cached = self._dataset_cache.get(name)
        if cached is not None and cached[0] == text:
            return cached[1]
        dataset = arff.parse_arff(text)
        self._dataset_cache[name] = (text, dataset)
        return dataset

    def list_datasets(self) -> list[str]:
        return [name for name in self.list_collections()
                if name not in RESERVED_COLLECTIONS
                and self.exists(name, DATASET_KEY)]

    # ------------------------------------------------- experiment layer

    def put_fold_assignment(self, assignment: FoldAssignment,
                            dataset_name: str, force: bool = False) -> str:
        """Store one fold's role vector under its canonical key.

        Role vectors are per dataset (their length is the dataset's
        instance count), so the document keeps one vector per dataset
        name; re-puts merge.
        """
        dataset = self.get_dataset(dataset_name)
        if len(assignment.roles) != dataset.n_instances:
            raise DataError(
                f"role vector has {len(assignment.roles)} entries, dataset "
                f"{dataset_name} has {dataset.n_instances} instances")
        wire = roles_to_wire(assignment.roles)
        body = {
            "toolkit": assignment.toolkit,
            "partition_seed": assignment.partition_seed,
            "scheme": scheme_to_wire(assignment.scheme),
            "fold": assignment.fold_index,
            "datasets": {dataset_name: wire},
        }
        key = assignment.key
        with self._lock:
            if self.exists(TRAINING_SETS, key):
                existing = self.get(TRAINING_SETS, key).body
                same_header = all(existing.get(field) == body[field]
                                  for field in ("toolkit", "partition_seed",
                                                "scheme", "fold"))
                if not same_header:
                    if not force:
                        raise StoreConflictError(
                            f"conflicting fold assignment {key}")
                    existing = body
                datasets = dict(existing["datasets"])
                if (dataset_name in datasets
                        and datasets[dataset_name] != wire and not force):
                    raise StoreConflictError(
                        f"conflicting fold assignment {key} for {dataset_name}")
                datasets[dataset_name] = wire
                merged = dict(existing)
                merged["datasets"] = datasets
                body = merged
            return self.put(TRAINING_SETS, key, body, force=True)

    def get_fold_assignment(self, key: str,
                            dataset_name: str) -> FoldAssignment:
        document = self.get(TRAINING_SETS, key)
        body = document.body
        if dataset_name not in body["datasets"]:
            raise NotFoundError(
                f"fold assignment {key} has no roles for {dataset_name}")
        roles = roles_from_wire(body["datasets"][dataset_name])
        scheme_info = body["scheme"]
        if scheme_info["kind"] == "kfold":
            scheme = KFold(scheme_info["num_folds"])
        elif scheme_info["kind"] == "percent_split":
            scheme = PercentSplit(scheme_info["test_percent"])
        else:
            scheme = FixedSplit()
        return FoldAssignment(body["toolkit"], body["partition_seed"],
                              scheme, body["fold"], roles)

    def put_experiment(self, dataset_name: str, key: ExperimentKey,
                       partition: FoldAssignment,
                       predictions: PredictionSet,
                       force: bool = False) -> str:
        """Merge one fold's predictions into the experiment's document
        (key ``LA_hpSeed/partitionSeed``, Figure-style fold -> {#: pred}
        body with 1-based numbers)."""
        dataset = self.get_dataset(dataset_name)
        if not self.exists(TRAINING_SETS, partition.key):
            raise StoreConflictError(
                f"dangling partition reference: {partition.key}")
        stored = self.get(TRAINING_SETS, partition.key).body
        if dataset_name not in stored["datasets"]:
            raise StoreConflictError(
                f"dangling partition reference: {partition.key} "
                f"has no roles for {dataset_name}")
        predictions.validate(dataset)

        doc_key = f"{key.label}/{partition.partition_seed}"
        fold_map = {str(i + 1): int(p) + 1
                    for i, p in sorted(predictions.predictions.items())}
        body = {
            "toolkit": key.toolkit,
            "algorithm": key.algorithm,
            "hyperparameter_seed": key.hyperparameter_seed,
            "partition": partition.family,
            "partition_seed": partition.partition_seed,
            "folds": {str(partition.fold_index): fold_map},
        }
        with self._lock:
            if self.exists(dataset_name, doc_key):
                existing = self.get(dataset_name, doc_key).body
                same_header = all(existing.get(field) == body[field]
                                  for field in ("toolkit", "algorithm",
                                                "hyperparameter_seed",
                                                "partition", "partition_seed"))
                if not same_header and not force:
                    raise StoreConflictError(
                        f"conflicting experiment {dataset_name}/{doc_key}")
                folds = dict(existing["folds"]) if same_header else {}
                fold_id = str(partition.fold_index)
                if (fold_id in folds and folds[fold_id] != fold_map
                        and not force):
                    raise StoreConflictError(
                        f"conflicting experiment {dataset_name}/{doc_key} "
                        f"fold {fold_id}")
                folds[fold_id] = fold_map
                merged = dict(body)
                merged["folds"] = folds
                body = merged
            return self.put(dataset_name, doc_key, body, force=True)

    def experiment_documents(self, dataset_name: str) -> list[Document]:
        """Experiment documents of one dataset, sorted by key."""
        return [doc for doc in self.query(dataset_name)
                if doc.key not in RESERVED_KEYS]

    def prediction_sets(self, dataset_name: str,
                        document: Document) -> list[PredictionSet]:
        """Rebuild in-memory prediction sets (0-based) from a stored
        experiment document."""
        body = document.body
        key = ExperimentKey(body["toolkit"], body["algorithm"],
                            body["hyperparameter_seed"])
        label = f"{body['algorithm']}_{body['hyperparameter_seed']}"
        if self.exists(ALGORITHMS, label):
            registered = self.get(ALGORITHMS, label).body
            key = ExperimentKey(body["toolkit"], body["algorithm"],
                                body["hyperparameter_seed"],
                                registered["hyperparameters"])
        out = []
        for fold_id in sorted(body["folds"], key=int):
            partition = self.get_fold_assignment(
                f"{body['partition']}_{fold_id}", dataset_name)
            predictions = {int(number) - 1: int(value) - 1
                           for number, value in body["folds"][fold_id].items()}
            out.append(PredictionSet(key, partition, predictions))
        return out

    # ------------------------------------------------ metafeature layer

    def put_metafeatures(self, dataset_name: str, kind: str, body: dict,
                         force: bool = False) -> str:
        """Store the dataset-level (measure -> value) or instance-level
        (1-based instance number -> measure -> value) document."""
        dataset = self.get_dataset(dataset_name)
        if kind == DATASET_LEVEL:
            for measure, value in body.items():
                if value is not None and not isinstance(value, (int, float)):
                    raise DataError(f"measure {measure} is not numeric")
            return self.put(dataset_name, DATASET_METAFEATURES_KEY, body,
                            force)
        if kind == INSTANCE_LEVEL:
            for number in body:
                index = int(number)
                if not 1 <= index <= dataset.n_instances:
                    raise DataError(
                        f"instance index {index} beyond dataset size "
                        f"{dataset.n_instances}")
            wire = {str(number): values for number, values in body.items()}
            return self.put(dataset_name, INSTANCE_METAFEATURES_KEY, wire,
                            force)
        raise DataError(f"unknown meta-feature kind '{kind}'")

    # -------------------------------------------------- algorithm layer

    def put_algorithm(self, key: ExperimentKey,
                      param_flags: dict[str, str] | None = None,
                      param_order: list[str] | None = None,
                      force: bool = False) -> str:
        """Register a learning-algorithm setting (Table-1 row) plus its
        cross-toolkit parameter map (Table-2 row).

        ``param_flags`` maps normalized parameter names to the toolkit's
        command-line flag ('?' when the toolkit lacks the parameter);
        values are parsed out of the verbatim hyperparameter string.  With
        ``param_flags=None`` an existing document is kept as-is.
        """
        with self._lock:
            if self.exists(ALGORITHMS, key.label):
                existing = self.get(ALGORITHMS, key.label).body
                same_core = (existing["toolkit"] == key.toolkit
                             and existing["algorithm"] == key.algorithm
                             and existing["hyperparameters"]
                             == key.hyperparameter_string)
                if not same_core and not force:
                    raise StoreConflictError(
                        f"conflicting algorithm document {key.label}")
                if same_core and param_flags is None:
                    return Document(key.label, existing).content_id
                if (same_core and existing["param_flags"]
                        and existing["param_flags"] != param_flags
                        and not force):
                    raise StoreConflictError(
                        f"conflicting algorithm document {key.label}: "
                        "different parameter map already stored")
            flags = dict(param_flags or {})
            order = list(param_order or flags.keys())
            body = {
                "algorithm": key.algorithm,
                "toolkit": key.toolkit,
                "hyperparameter_seed": key.hyperparameter_seed,
                "hyperparameters": key.hyperparameter_string,
                "defaults": key.is_default_setting,
                "param_order": order,
                "param_flags": flags,
                "param_values": parse_param_values(key.hyperparameter_string,
                                                   flags),
            }
            return self.put(ALGORITHMS, key.label, body, force=True)

    def algorithm_documents(self) -> list[Document]:
        return self.query(ALGORITHMS)

    def experiment_key(self, label: str) -> ExperimentKey:
        document = self.get(ALGORITHMS, label)
        return ExperimentKey(document.body["toolkit"],
                             document.body["algorithm"],
                             document.body["hyperparameter_seed"],
                             document.body["hyperparameters"])


def parse_param_values(verbatim: str,
                       flags: dict[str, str]) -> dict[str, float | None]:
    """Pull normalized parameter values out of a verbatim command-line
    string: the token after a flag when numeric, 1.0 for bare switches,
    None for absent or unsupported parameters."""
    tokens = verbatim.split()
    values: dict[str, float | None] = {}
    for name, flag in flags.items():
        if not flag or flag == "?":
            values[name] = None
            continue
        try:
            at = tokens.index(flag)
        except ValueError:
            values[name] = None
            continue
        if at + 1 < len(tokens):
            try:
                values[name] = float(tokens[at + 1])
                continue
            except ValueError:
                pass
        values[name] = 1.0
    return values

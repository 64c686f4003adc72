"""Parsing, validation, and ingest of experiment run files.

The run-file format is this repository's own and is fixed bit-exactly:

* line 1 (tab-separated): toolkit, algorithm, hyperparameter seed, verbatim
  hyperparameter string.  A seed of -1 means toolkit defaults.
* line 2: the partition family, ``toolkit_seed_numFolds`` for k-fold runs
  or ``toolkit_0_0`` for a fixed train/test split.
* remaining lines (CSV): ``fold,instance,role`` for training lines and
  ``fold,instance,?,prediction`` for test lines.  Instances, folds, and
  predicted class values are 1-based; roles are ``?`` (test), ``0``
  (filtered), or a training weight in (0, 1].

Every fold must list every instance exactly once, and k-fold runs must
test each instance exactly once overall.  Ingest validates the whole file
against the registered dataset before writing anything.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import RunFileError, StoreConflictError
from .model import (ExperimentKey, FixedSplit, FoldAssignment, KFold,
                    PredictionSet, Role, check_kfold_coverage)
from .store import (ALGORITHMS, TRAINING_SETS, DocumentStore, roles_to_wire,
                    scheme_to_wire)

_FAMILY_RE = re.compile(r"^(.+)_(-?\d+)_(\d+)$")


@dataclass(frozen=True)
class RunFile:
    experiment: ExperimentKey
    folds: tuple[FoldAssignment, ...]
    prediction_sets: tuple[PredictionSet, ...]


def parse_run_file(text: str, n_instances: int, n_classes: int) -> RunFile:
    lines = text.splitlines()
    if len(lines) < 3:
        raise RunFileError("bad run header: file too short")
    header = lines[0].split("\t")
    if len(header) != 4:
        raise RunFileError(
            f"bad run header: expected 4 tab-separated fields, "
            f"got {len(header)}")
    toolkit, algorithm, seed_text, hyperparameters = header
    try:
        hp_seed = int(seed_text)
    except ValueError:
        raise RunFileError(
            f"bad run header: seed '{seed_text}' is not an integer") from None
    if not toolkit or not algorithm:
        raise RunFileError("bad run header: empty toolkit or algorithm")
    experiment = ExperimentKey(toolkit, algorithm, hp_seed, hyperparameters)

    family = lines[1].strip()
    m = _FAMILY_RE.match(family)
    if m is None:
        raise RunFileError(f"bad partition line '{family}'")
    part_toolkit, part_seed, third = m.group(1), int(m.group(2)), int(m.group(3))
    if third == 0:
        if part_seed != 0:
            raise RunFileError(f"bad partition line '{family}'")
        scheme = FixedSplit()
        n_folds = 1
    else:
        scheme = KFold(third)
        n_folds = third

    roles: dict[int, list[Role | str]] = {
        f: ["absent"] * n_instances for f in range(1, n_folds + 1)}
    predictions: dict[int, dict[int, int]] = {f: {} for f in roles}

    for lineno, raw in enumerate(lines[2:], start=3):
        line = raw.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) not in (3, 4):
            raise RunFileError(f"bad body line at line {lineno}")
        try:
            fold = int(parts[0])
            number = int(parts[1])
        except ValueError:
            raise RunFileError(f"bad body line at line {lineno}") from None
        if fold not in roles:
            raise RunFileError(f"fold {fold} outside 1..{n_folds} "
                               f"at line {lineno}")
        if not 1 <= number <= n_instances:
            raise RunFileError(f"instance {number} outside 1..{n_instances} "
                               f"at line {lineno}")
        index = number - 1
        if roles[fold][index] != "absent":
            raise RunFileError(f"duplicate line for fold {fold} "
                               f"instance {number}")
        token = parts[2]
        predicted = parts[3] if len(parts) == 4 and parts[3] != "" else None
        if token == "?":
            roles[fold][index] = None
            if predicted is not None:
                try:
                    value = int(predicted)
                except ValueError:
                    raise RunFileError(
                        f"unknown class label '{predicted}' "
                        f"at line {lineno}") from None
                if not 1 <= value <= n_classes:
                    raise RunFileError(f"unknown class label '{predicted}' "
                                       f"at line {lineno}")
                predictions[fold][index] = value - 1
        else:
            if predicted is not None:
                raise RunFileError(f"role conflict at instance {number}: "
                                   "prediction given for a training line")
            try:
                weight = float(token)
            except ValueError:
                raise RunFileError(f"bad role '{token}' "
                                   f"at line {lineno}") from None
            if not 0.0 <= weight <= 1.0:
                raise RunFileError(f"training weight {weight} out of range "
                                   f"at line {lineno}")
            roles[fold][index] = weight

    folds = []
    sets = []
    for f in sorted(roles):
        vector = roles[f]
        for index, role in enumerate(vector):
            if role == "absent":
                raise RunFileError(f"fold {f} misses instance {index + 1}")
        assignment = FoldAssignment(part_toolkit, part_seed, scheme, f,
                                    tuple(vector))   # type: ignore[arg-type]
        folds.append(assignment)
        sets.append(PredictionSet(experiment, assignment, predictions[f]))
    check_kfold_coverage(folds)
    return RunFile(experiment, tuple(folds), tuple(sets))


def serialize_run_file(run: RunFile) -> str:
    """Render a run file in the canonical format parsed above."""
    key = run.experiment
    lines = [f"{key.toolkit}\t{key.algorithm}\t{key.hyperparameter_seed}"
             f"\t{key.hyperparameter_string}"]
    lines.append(run.folds[0].family)
    by_fold = {ps.partition.fold_index: ps for ps in run.prediction_sets}
    for assignment in sorted(run.folds, key=lambda a: a.fold_index):
        ps = by_fold.get(assignment.fold_index)
        for index, role in enumerate(assignment.roles):
            number = index + 1
            if role is None:
                predicted = ps.predictions.get(index) if ps else None
                cell = "" if predicted is None else str(predicted + 1)
                lines.append(f"{assignment.fold_index},{number},?,{cell}")
            elif role == int(role):
                lines.append(f"{assignment.fold_index},{number},{int(role)}")
            else:
                lines.append(f"{assignment.fold_index},{number},{role!r}")
    return "\n".join(lines) + "\n"


def _preflight_conflicts(store: DocumentStore, dataset_name: str,
                         run: RunFile) -> None:
    """Raise before any write if one of the puts would conflict, keeping
    ingest all-or-nothing."""
    key = run.experiment
    if store.exists(ALGORITHMS, key.label):
        body = store.get(ALGORITHMS, key.label).body
        if (body["toolkit"] != key.toolkit
                or body["algorithm"] != key.algorithm
                or body["hyperparameters"] != key.hyperparameter_string):
            raise StoreConflictError(
                f"conflicting algorithm document {key.label}")
    for assignment in run.folds:
        if not store.exists(TRAINING_SETS, assignment.key):
            continue
        body = store.get(TRAINING_SETS, assignment.key).body
        header_ok = (body["toolkit"] == assignment.toolkit
                     and body["partition_seed"] == assignment.partition_seed
                     and body["scheme"] == scheme_to_wire(assignment.scheme)
                     and body["fold"] == assignment.fold_index)
        roles_ok = (dataset_name not in body["datasets"]
                    or body["datasets"][dataset_name]
                    == roles_to_wire(assignment.roles))
        if not (header_ok and roles_ok):
            raise StoreConflictError(
                f"conflicting fold assignment {assignment.key}")
    for assignment, ps in zip(run.folds, run.prediction_sets):
        doc_key = f"{key.label}/{assignment.partition_seed}"
        if not store.exists(dataset_name, doc_key):
            continue
        body = store.get(dataset_name, doc_key).body
        header_ok = (body["toolkit"] == key.toolkit
                     and body["algorithm"] == key.algorithm
                     and body["hyperparameter_seed"] == key.hyperparameter_seed
                     and body["partition"] == assignment.family
                     and body["partition_seed"] == assignment.partition_seed)
        fold_map = {str(i + 1): p + 1 for i, p in ps.predictions.items()}
        fold_id = str(assignment.fold_index)
        folds_ok = (fold_id not in body["folds"]
                    or body["folds"][fold_id] == fold_map)
        if not (header_ok and folds_ok):
            raise StoreConflictError(
                f"conflicting experiment {dataset_name}/{doc_key}")


def ingest_run_file(store: DocumentStore, dataset_name: str, text: str,
                    force: bool = False) -> RunFile:
    """Validate a run file against the registered dataset and store it
    all-or-nothing; re-ingesting an identical file is a no-op."""
    dataset = store.get_dataset(dataset_name)
    run = parse_run_file(text, dataset.n_instances, dataset.n_classes)
    for ps in run.prediction_sets:
        ps.validate(dataset)
    if not force:
        _preflight_conflicts(store, dataset_name, run)
    store.put_algorithm(run.experiment, param_flags=None, force=force)
    for assignment in run.folds:
        store.put_fold_assignment(assignment, dataset_name, force=force)
    for assignment, ps in zip(run.folds, run.prediction_sets):
        store.put_experiment(dataset_name, run.experiment, assignment, ps,
                             force=force)
    return run

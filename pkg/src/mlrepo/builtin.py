"""Built-in experiment runner.

Cross-validates one of the bundled learners (stump, 1nn, lda, tree) and
stores the per-instance predictions through the same ingest path as an
external run file, so the repository can populate itself without any
external toolkit.  The toolkit name is ``builtin`` and the hyperparameter
seed is -1 (defaults).
"""

from __future__ import annotations

import numpy as np

from .errors import DataError
from .learners.crossval import stratified_folds
from .learners.distance import knn_predict
from .learners.encoding import feature_encoding
from .learners.lda import fit_lda
from .learners.stump import StumpMode, _pick_attribute, fit_stump
from .learners.tree import train_tree
from .model import Dataset, ExperimentKey, FoldAssignment, KFold, PredictionSet
from .runfiles import RunFile, ingest_run_file, serialize_run_file
from .store import DocumentStore

BUILTIN_TOOLKIT = "builtin"
BUILTIN_LEARNERS = ("stump", "1nn", "lda", "tree")


def fit_predict_builtin(dataset: Dataset, learner: str, train_rows,
                        test_rows) -> list[int]:
    """Train one built-in learner on ``train_rows`` and predict
    ``test_rows``; only training-row information enters the model."""
    test_instances = [dataset.instances[i] for i in test_rows]
    if learner == "1nn":
        subset = dataset.subset(train_rows)
        return knn_predict(subset, test_instances, k=1)
    if learner == "stump":
        attribute = _pick_attribute(dataset, train_rows, StumpMode.BEST,
                                    np.random.default_rng(0))
        stump = fit_stump(dataset, train_rows, attribute)
        return [stump.classify(row) for row in test_instances]
    if learner == "lda":
        subset = dataset.subset(train_rows)
        encoding = feature_encoding(subset)
        model = fit_lda(subset, None, encoding)
        return model.predict(encoding.encode_rows(test_instances)).tolist()
    if learner == "tree":
        tree = train_tree(dataset, pruned=True, rows=train_rows)
        return [tree.classify(row) for row in test_instances]
    raise DataError(f"unknown built-in learner '{learner}', "
                    f"expected one of {', '.join(BUILTIN_LEARNERS)}")


def build_run(dataset: Dataset, learner: str, seed: int,
              n_folds: int = 10) -> RunFile:
    """Cross-validate one learner with one partition seed into a run file."""
    n = dataset.n_instances
    if n < 2:
        raise DataError("built-in runs need at least 2 instances")
    folds = stratified_folds(dataset.class_labels(), n_folds, seed)
    key = ExperimentKey(BUILTIN_TOOLKIT, learner, -1, f"--learner {learner}")
    assignments = []
    prediction_sets = []
    for fold_index, test_rows in enumerate(folds, start=1):
        roles: list = [1.0] * n
        for i in test_rows:
            roles[i] = None
        assignment = FoldAssignment(BUILTIN_TOOLKIT, seed, KFold(len(folds)),
                                    fold_index, tuple(roles))
        train_rows = sorted(set(range(n)) - set(test_rows))
        predicted = fit_predict_builtin(dataset, learner, train_rows,
                                        test_rows)
        assignments.append(assignment)
        prediction_sets.append(
            PredictionSet(key, assignment, dict(zip(test_rows, predicted))))
    return RunFile(key, tuple(assignments), tuple(prediction_sets))


def run_builtin(store: DocumentStore, dataset_name: str, learner: str,
                seeds, n_folds: int = 10, force: bool = False) -> list[RunFile]:
    """Run one learner for every seed and store the results exactly as
    ingested external runs."""
    dataset = store.get_dataset(dataset_name)
    runs = []
    for seed in seeds:
        run = build_run(dataset, learner, seed, n_folds)
        ingest_run_file(store, dataset_name, serialize_run_file(run),
                        force=force)
        runs.append(run)
    return runs

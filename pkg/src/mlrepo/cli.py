"""Command-line front end.

Subcommands map one-to-one onto library operations: ``register`` a dataset
ARFF, ``run-builtin`` a bundled learner, ``ingest`` an external run file,
``compute`` meta-features, ``export`` a meta-data table, ``snapshot`` the
store, and ``query`` documents by key prefix.  Exit codes: 0 ok, 1 usage,
2 data error, 3 store conflict.
"""

from __future__ import annotations

import argparse
import sys

from . import tables
from .arff import parse_arff
from .builtin import BUILTIN_LEARNERS, run_builtin
from .errors import (DataError, NotFoundError, RepositoryError,
                     StoreConflictError)
from .features.dataset import as_measure_dict, compute_all
from .features.instance import (aggregate_hardness, as_hardness_dict,
                                compute_hardness)
from .model import Dataset
from .runfiles import ingest_run_file
from .store import DATASET_LEVEL, INSTANCE_LEVEL, DocumentStore

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CONFLICT = 3

TABLES = ("algorithms", "hyperparameters", "folds", "instance", "dataset",
          "per-algorithm")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlrepo",
                     description="Repository for instance-level machine "
                                 "learning experiment results.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--store", required=True,
                       help="store root directory")
        return p

    p = add("register", "register a dataset from an ARFF file")
    p.add_argument("path", help="ARFF file to register")
    p.add_argument("--name", help="dataset name (default: relation name)")
    p.add_argument("--class-attribute",
                   help="class attribute name (default: last attribute)")
    p.add_argument("--force", action="store_true",
                   help="replace a conflicting document")

    p = add("run-builtin", "cross-validate a built-in learner and store "
                           "its predictions")
    p.add_argument("--dataset", required=True)
    p.add_argument("--learner", required=True, choices=BUILTIN_LEARNERS)
    p.add_argument("--seeds", default="1",
                   help="comma-separated partition seeds (default: 1)")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--force", action="store_true")

    p = add("ingest", "ingest an external run file")
    p.add_argument("path", help="run file to ingest")
    p.add_argument("--dataset", required=True)
    p.add_argument("--force", action="store_true")

    p = add("compute", "compute and store meta-features")
    p.add_argument("--dataset", required=True)
    p.add_argument("--level", choices=("dataset", "instance", "both"),
                   default="both")
    p.add_argument("--k", type=int, default=5,
                   help="neighborhood size for the kDN measure")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the interpolation-based measures")
    p.add_argument("--folds", type=int, default=10,
                   help="landmarker cross-validation folds")
    p.add_argument("--force", action="store_true")

    p = add("export", "export a meta-data table as ARFF")
    p.add_argument("table", choices=TABLES)
    p.add_argument("--dataset", help="dataset (folds/instance tables)")
    p.add_argument("--algorithm",
                   help="algorithm (hyperparameters/per-algorithm tables)")
    p.add_argument("--out", help="output file (default: stdout)")

    p = add("snapshot", "freeze the current store state as a new revision")

    p = add("query", "list documents by key prefix")
    p.add_argument("collection")
    p.add_argument("prefix", nargs="?", default="")
    p.add_argument("--revision", type=int)

    return parser


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise DataError(f"bad seed list '{text}'") from None


def _cmd_register(args) -> int:
    with open(args.path, "r", encoding="utf-8") as handle:
        dataset = parse_arff(handle.read(), args.class_attribute)
    if args.name:
        dataset = Dataset(args.name, dataset.attributes, dataset.instances,
                          dataset.class_index)
    store = DocumentStore(args.store)
    store.put_dataset(dataset, force=args.force)
    print(f"registered {dataset.name}: {dataset.n_instances} instances, "
          f"{dataset.n_attributes} attributes")
    return EXIT_OK


def _cmd_run_builtin(args) -> int:
    store = DocumentStore(args.store)
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise DataError("no seeds given")
    runs = run_builtin(store, args.dataset, args.learner, seeds,
                       args.folds, force=args.force)
    for run in runs:
        total = sum(len(ps.predictions) for ps in run.prediction_sets)
        print(f"stored {run.experiment.label}/"
              f"{run.folds[0].partition_seed}: {total} predictions")
    return EXIT_OK


def _cmd_ingest(args) -> int:
    store = DocumentStore(args.store)
    with open(args.path, "r", encoding="utf-8") as handle:
        run = ingest_run_file(store, args.dataset, handle.read(),
                              force=args.force)
    print(f"ingested {run.experiment.label}/{run.folds[0].partition_seed} "
          f"({len(run.folds)} folds)")
    return EXIT_OK


def _cmd_compute(args) -> int:
    store = DocumentStore(args.store)
    dataset = store.get_dataset(args.dataset)
    vectors = None
    if args.level in ("instance", "both"):
        vectors = compute_hardness(dataset, k=args.k)
        body = {str(i + 1): as_hardness_dict(v)
                for i, v in enumerate(vectors)}
        store.put_metafeatures(args.dataset, INSTANCE_LEVEL, body,
                               force=args.force)
        print(f"stored instance meta-features for {dataset.n_instances} "
              "instances")
    if args.level in ("dataset", "both"):
        mf = compute_all(dataset, seed=args.seed, n_folds=args.folds)
        body = as_measure_dict(mf)
        if vectors is not None:
            body.update(aggregate_hardness(vectors))
        store.put_metafeatures(args.dataset, DATASET_LEVEL, body,
                               force=args.force)
        defined = sum(v is not None for v in body.values())
        print(f"stored {defined} dataset meta-features")
        for group, note in sorted(mf.notes.items()):
            print(f"note [{group}]: {note}")
    return EXIT_OK


def _cmd_export(args) -> int:
    store = DocumentStore(args.store)
    table = args.table
    if table == "algorithms":
        text = tables.export_algorithm_table(store)
    elif table == "hyperparameters":
        if not args.algorithm:
            raise DataError("--algorithm is required for this table")
        text = tables.export_hyperparameter_mapping(store, args.algorithm)
    elif table == "folds":
        if not args.dataset:
            raise DataError("--dataset is required for this table")
        text = tables.export_fold_table(store, args.dataset)
    elif table == "instance":
        if not args.dataset:
            raise DataError("--dataset is required for this table")
        text = tables.export_instance_level(store, args.dataset)
    elif table == "dataset":
        text = tables.export_dataset_level(store)
    else:
        if not args.algorithm:
            raise DataError("--algorithm is required for this table")
        text = tables.export_per_algorithm(store, args.algorithm)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_snapshot(args) -> int:
    store = DocumentStore(args.store)
    print(store.snapshot())
    return EXIT_OK


def _cmd_query(args) -> int:
    store = DocumentStore(args.store)
    for document in store.query(args.collection, args.prefix,
                                revision=args.revision):
        print(document.key)
    return EXIT_OK


_COMMANDS = {
    "register": _cmd_register,
    "run-builtin": _cmd_run_builtin,
    "ingest": _cmd_ingest,
    "compute": _cmd_compute,
    "export": _cmd_export,
    "snapshot": _cmd_snapshot,
    "query": _cmd_query,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except StoreConflictError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFLICT
    except (DataError, NotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except RepositoryError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())

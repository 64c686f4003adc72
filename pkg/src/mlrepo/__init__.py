"""mlrepo: embeddable repository for instance-level machine learning
experiment results, meta-feature computation, and meta-data set export."""

from importlib import resources

from .arff import parse_arff, parse_document, write_arff, write_meta_table
from .builtin import BUILTIN_LEARNERS, run_builtin
from .errors import (ArffError, DataError, NotFoundError, RepositoryError,
                     RunFileError, StoreConflictError, StoreError)
from .features import (DatasetMetaFeatures, InstanceHardnessVector,
                       aggregate_hardness, as_hardness_dict, as_measure_dict,
                       compute_all, compute_hardness)
from .model import (AttributeSpec, Dataset, ExperimentKey, FixedSplit,
                    FoldAssignment, KFold, PercentSplit, PredictionSet,
                    Violation, aggregate_accuracy, format_accuracy,
                    parse_partition_key, validate_dataset)
from .runfiles import RunFile, ingest_run_file, parse_run_file, serialize_run_file
from .store import Document, DocumentStore
from .tables import (export_algorithm_table, export_dataset_level,
                     export_fold_table, export_hyperparameter_mapping,
                     export_instance_level, export_per_algorithm)

__version__ = "0.1.0"


def load_bundled_dataset(name: str = "iris") -> Dataset:
    """Parse one of the ARFF datasets shipped with the package."""
    text = (resources.files("mlrepo") / "data" / f"{name}.arff").read_text(
        encoding="utf-8")
    return parse_arff(text)


__all__ = [
    "ArffError", "AttributeSpec", "BUILTIN_LEARNERS", "DataError", "Dataset",
    "DatasetMetaFeatures", "Document", "DocumentStore", "ExperimentKey",
    "FixedSplit", "FoldAssignment", "InstanceHardnessVector", "KFold",
    "NotFoundError", "PercentSplit", "PredictionSet", "RepositoryError",
    "RunFile", "RunFileError", "StoreConflictError", "StoreError",
    "Violation", "aggregate_accuracy", "aggregate_hardness",
    "as_hardness_dict", "as_measure_dict", "compute_all", "compute_hardness",
    "export_algorithm_table", "export_dataset_level", "export_fold_table",
    "export_hyperparameter_mapping", "export_instance_level",
    "export_per_algorithm", "format_accuracy", "ingest_run_file",
    "load_bundled_dataset", "parse_arff", "parse_document",
    "parse_partition_key", "parse_run_file", "run_builtin",
    "serialize_run_file", "validate_dataset", "write_arff",
    "write_meta_table",
]

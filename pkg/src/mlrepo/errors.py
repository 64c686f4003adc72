"""Exception hierarchy shared across the package."""


class RepositoryError(Exception):
    """Base class for all errors raised by this package."""


class DataError(RepositoryError):
    """Invalid data: malformed datasets, bad measure preconditions, parse trouble."""


class ArffError(DataError):
    """ARFF text that cannot be parsed or written."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} at line {line}"
        super().__init__(message)
        self.line = line


class RunFileError(DataError):
    """Malformed experiment run file."""


class StoreError(RepositoryError):
    """Document store failure."""


class StoreConflictError(StoreError):
    """A put would overwrite an existing document with a different body."""


class NotFoundError(StoreError):
    """Requested document, collection, or revision does not exist."""

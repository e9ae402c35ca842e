"""Exception types shared across the package."""


class DataError(ValueError):
    """Raised when input data violates a contract (bad records, empty
    corpora, missing gold labels, stale artifacts, ...). The CLI maps
    these to exit code 2."""


class InvariantError(RuntimeError):
    """Raised when an internal consistency check fails. Indicates a bug,
    not bad input. The CLI maps these to exit code 3."""

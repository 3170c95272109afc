"""Exception types shared across the toolkit."""


class DataError(Exception):
    """Malformed or inconsistent input data."""


class SgmParseError(DataError):
    """Structurally unrecoverable SGM input."""


class AlignmentError(DataError):
    """Parallel streams that do not line up."""


class BackendError(Exception):
    """A translation backend failed after exhausting retries.

    ``first_line`` and ``last_line`` give the 0-based index range (inclusive)
    of the input lines in the failing batch, when known.
    """

    def __init__(self, message: str, first_line: int | None = None, last_line: int | None = None):
        if first_line is not None:
            message = f"{message} (input lines {first_line}..{last_line})"
        super().__init__(message)
        self.first_line = first_line
        self.last_line = last_line

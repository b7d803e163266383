"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: usage errors exit 1 (argparse level),
input/parse problems exit 2, infeasible or invalid parameters exit 3.
"""


class CafnetError(Exception):
    """Base class for all package-specific errors."""


class EdgeListParseError(CafnetError):
    """A line of an edge-list file could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class InputError(CafnetError):
    """Invalid input data: bad files, unknown node ids, malformed partitions."""


class ParameterError(CafnetError):
    """A numeric parameter is outside its admissible range."""


class InfeasibleError(CafnetError):
    """Requested parameters cannot produce a valid object (e.g. generator bounds)."""

"""Exception taxonomy, mirrored onto CLI exit codes.

InputError covers everything wrong with the data on disk (missing files,
missing columns, malformed values); ParameterError covers bad settings.
"""


class CafevalError(Exception):
    """Base class for everything raised on purpose by this package."""


class InputError(CafevalError):
    """The input files cannot be used as requested."""


class ParameterError(CafevalError):
    """A configuration value is out of its documented range."""

"""Error taxonomy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 1, InputError -> 2,
InvariantError (and anything unexpected) -> 3.
"""


class SemtopoError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(SemtopoError):
    """Unusable configuration: bad parameter values or missing sources."""


class InputError(SemtopoError):
    """An input file is missing, malformed, or inconsistent with the corpus."""


class InvariantError(SemtopoError):
    """An internal consistency check failed."""

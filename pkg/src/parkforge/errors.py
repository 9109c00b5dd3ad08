"""Exception hierarchy shared by every pipeline stage.

Exit codes follow the CLI contract: 2 for validation and configuration
problems, 3 for I/O failures, 4 for internal invariant violations.
"""


class ParkforgeError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ValidationError(ParkforgeError):
    """Bad input data or parameters."""

    exit_code = 2


class ConfigError(ValidationError):
    """Unparseable or inconsistent pipeline configuration."""


class FormatError(ValidationError):
    """A file exists and is readable but is not in a supported format."""


class PipelineIOError(ParkforgeError):
    """Reading or writing an artifact failed."""

    exit_code = 3


class InternalError(ParkforgeError):
    """An internal invariant did not hold; indicates a bug."""

    exit_code = 4

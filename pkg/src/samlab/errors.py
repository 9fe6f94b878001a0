"""Exception hierarchy shared across the package."""


class SamlabError(Exception):
    """Base class for all package errors."""


class ShapeError(SamlabError):
    """Array dimensions incompatible with the model or operation."""


class NonFiniteError(SamlabError):
    """A forward pass overflowed to inf/nan."""


class PartitionError(SamlabError):
    """A micro-batch plan does not partition its minibatch as required."""


class EnumerationBudgetError(SamlabError):
    """Exhaustive enumeration would exceed the configured budget."""


class AlignmentUndefinedError(SamlabError):
    """The alignment constant is undefined because the variance matrix is zero."""


class OracleLimitError(SamlabError):
    """A dense oracle was asked for a dimension above its configured limit."""


class IdxFormatError(SamlabError):
    """Malformed IDX binary file."""

    def __init__(self, message, offset=None):
        super().__init__(message if offset is None else f"{message} (at byte {offset})")
        self.offset = offset


class ConfigError(SamlabError):
    """Invalid experiment configuration (CLI exit code 2)."""


class DivergenceError(SamlabError):
    """Training loss became non-finite (CLI exit code 3)."""

    def __init__(self, step, message=None):
        super().__init__(message or f"training diverged at step {step}")
        self.step = step

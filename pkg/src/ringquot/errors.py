"""Exception hierarchy shared by the engine and the CLI."""


class RingQuotError(Exception):
    """Base class for all library errors."""


class UsageError(RingQuotError, ValueError):
    """Caller passed inconsistent arguments (dimension or side mismatch)."""


class ValidationError(RingQuotError, ValueError):
    """Input data violates an algebraic axiom."""


class UnsupportedConfiguration(RingQuotError):
    """The requested computation is not available for this field or size."""


class PreconditionError(RingQuotError):
    """A mathematical precondition of an operation does not hold."""


class EngineError(RingQuotError):
    """An internal consistency check failed; indicates a bug, not a math outcome."""

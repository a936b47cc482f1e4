"""Exception types shared across the library."""


class ListpackError(Exception):
    """Base class for all library-specific errors."""


class FormatError(ListpackError):
    """Malformed JSON payload or file."""


class PreconditionFailed(ListpackError):
    """An operation was called on inputs outside its contract."""


class PremiseViolated(ListpackError):
    """A matching-repair procedure was handed inputs that do not satisfy
    the structural premises the procedure relies on."""


class InternalAssertion(ListpackError):
    """A condition the supporting theory rules out was observed at runtime.

    Raising this always signals an implementation bug, never bad user input."""


class ScaleRefused(ListpackError):
    """Requested instance is beyond the documented desk-scale limits."""


class LimitExceeded(ListpackError):
    """An enumeration produced more results than the caller's limit."""


class OracleTimeout(ListpackError):
    """An exhaustive verification ran out of its search budget."""

"""Shared exception types."""


class PolybanError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PolybanError, ValueError):
    """Operands have incompatible dimensions."""


class NotANorm(PolybanError, ValueError):
    """Ball data does not describe a norm (unbounded or not full-dimensional)."""


class PreconditionError(PolybanError, ValueError):
    """A documented precondition of an operation is violated."""


class VerificationError(PolybanError):
    """An exact postcondition check failed; indicates an internal bug."""


class CapExceeded(PolybanError):
    """A dimension cap or stage budget was exceeded."""


class ParseError(PolybanError, ValueError):
    """Malformed serialized input."""

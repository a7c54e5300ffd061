"""Exception types shared across the package."""


class CapModelError(Exception):
    """Base class for all capmodel errors."""


class DomainError(CapModelError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceLimitError(CapModelError, ValueError):
    """A request exceeds a hard size bound (e.g. exhaustive enumeration)."""

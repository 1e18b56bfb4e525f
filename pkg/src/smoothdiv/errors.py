"""Exception types shared by the library and mapped to CLI exit codes."""


class SmoothdivError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SmoothdivError, ValueError):
    """An input violates a mathematical precondition (CLI exit code 4)."""


class ResourceError(SmoothdivError, RuntimeError):
    """A request exceeds a configured resource ceiling (CLI exit code 3)."""


class ConstructionError(SmoothdivError, RuntimeError):
    """A piecewise table failed its accuracy certificate during construction."""

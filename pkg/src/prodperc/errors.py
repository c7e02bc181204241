"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument is outside the domain an operation accepts."""


class CapacityError(RuntimeError):
    """The requested object is too large for an exhaustive or in-memory run."""

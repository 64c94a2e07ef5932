"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside a function's mathematical domain."""


class NumericError(RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""

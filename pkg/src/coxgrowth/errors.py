"""Exception hierarchy; the CLI maps each family to an exit code."""


class CoxGrowthError(Exception):
    """Base class for all errors raised by this package."""


class DiagramError(CoxGrowthError, ValueError):
    """Invalid diagram input (syntax, labels, indices, connectivity)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DisconnectedDiagramError(DiagramError):
    pass


class ResourceCapError(CoxGrowthError):
    """A configured resource cap (field degree, |Sigma|, states, ...) was exceeded."""

    def __init__(self, cap, limit, message):
        self.cap = cap
        self.limit = limit
        super().__init__(f"{message} (cap {cap}={limit})")


class InternalInvariantError(CoxGrowthError, AssertionError):
    """Something that the theory guarantees did not happen; indicates a bug."""

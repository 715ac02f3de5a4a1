"""Exception hierarchy shared by all modules."""


class UWordError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(UWordError, ValueError):
    """Input does not have the required shape or value range."""


class UnsupportedParameterError(UWordError, ValueError):
    """Parameters are well-formed but outside what the construction supports."""


class BoundExceededError(UWordError, ValueError):
    def __init__(self, requested, maximum):
        super().__init__(f"requested {requested} removals, maximum is {maximum}")
        self.requested = requested
        self.maximum = maximum


class ResourceGuardError(UWordError):
    """Refusing a computation whose size exceeds the configured budget."""


class PlanStaleError(UWordError):
    """A removal plan refers to an edge that is not in the graph."""


class NotEulerianError(UWordError):
    def __init__(self, diagnosis):
        super().__init__(f"graph is not Eulerian: {diagnosis}")
        self.diagnosis = diagnosis


class InfeasibleExtensionError(UWordError):
    """Neither extension rule produced a window matching the next edge."""


class InternalConsistencyError(UWordError, AssertionError):
    """A structural property that should always hold was violated."""

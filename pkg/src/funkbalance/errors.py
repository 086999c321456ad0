"""Exception types shared across the package."""


class InteriorViolationError(ValueError):
    """A base point is not strictly inside the body (within the margin)."""


class RegularityError(RuntimeError):
    """The metric tensor failed to be positive definite at some direction."""

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class BodySpecError(ValueError):
    """A body or field definition file is malformed."""


class ConvergenceError(RuntimeError):
    """An iterative solve exhausted its iteration budget."""

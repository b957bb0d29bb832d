"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class BornValidityError(ArithmeticError):
    """A first-Born phase shift gave |sin delta| > 1.

    The raw (unclipped) value is kept in ``sin_delta``.
    """

    def __init__(self, message, sin_delta):
        super().__init__(message)
        self.sin_delta = sin_delta


class ConvergenceError(ArithmeticError):
    """An iterative or adaptive procedure did not reach its tolerance.

    ``details`` carries whatever the caller needs to diagnose the failure
    (error estimates, last iterates).
    """

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

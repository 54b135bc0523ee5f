"""Exception types raised across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class NumericalError(ArithmeticError):
    """A numerical routine failed (singular system, optimizer stalled)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

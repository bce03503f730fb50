"""Exception hierarchy shared by all hyperdot modules."""


class HyperdotError(Exception):
    """Base class for library errors."""


class DomainError(HyperdotError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ConvergenceError(HyperdotError, RuntimeError):
    """An iterative procedure did not meet its residual tolerance."""


class DivergenceError(HyperdotError, ArithmeticError):
    """An integral or measure does not exist for the requested parameters."""


class ToleranceError(HyperdotError, RuntimeError):
    """Quadrature finished without reaching the requested tolerance.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class WrongKindError(HyperdotError, TypeError):
    """Operation requested for a system kind that does not support it."""

"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Inputs fall outside the admissible parameter domain."""


class DegenerateBoundError(ArithmeticError):
    """A bound formula has a vanishing or sign-flipped denominator."""


class ConvergenceError(RuntimeError):
    """A numerical procedure did not reach its requested accuracy.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class QuadratureError(ConvergenceError):
    """Adaptive quadrature exhausted its subdivision budget."""

"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the chart or function domain."""


class DepthError(ValueError):
    """A transformed landmark has nonpositive depth in the camera frame."""


class NonFiniteDerivativeError(ArithmeticError):
    """A derivative extraction produced NaN or Inf entries.

    The partially extracted array is attached as ``values`` so callers can
    inspect which entries failed.
    """

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values

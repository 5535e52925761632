class HexsumError(Exception):
    """Base class for all errors raised by hexsum."""


class QuadratureError(HexsumError):
    """A quadrature did not reach its requested tolerance."""

    def __init__(self, message, *, value=None, error=None, subdivisions=None):
        super().__init__(message)
        self.value = value
        self.error = error
        self.subdivisions = subdivisions


class DegenerateKnotsError(HexsumError, ValueError):
    """A B-spline knot pair collapsed (a == b)."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class BoundaryBandError(HexsumError, ValueError):
    """A pairwise difference sits on the |t_i - t_j| = threshold boundary."""


class ConsistencyError(HexsumError, ArithmeticError):
    """Two independent evaluation routes disagreed beyond tolerance."""

"""Exception hierarchy shared by all splinekit modules."""


class SplineError(ValueError):
    """Invalid spline data or an invalid request on a spline."""


class FormatError(SplineError):
    """A file could not be read or written in the requested format."""


class NumericalError(SplineError, ArithmeticError):
    """A numerical procedure failed (singular Jacobian, non-SPD matrix, ...)."""

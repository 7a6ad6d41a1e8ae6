"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Array shapes or vector lengths are inconsistent."""


class MatrixSizeError(DimensionError):
    """A dense n^2 x n^2 operator was requested for too large an n."""


class NotPositiveDefiniteError(ValueError):
    """A matrix that must be positive definite has a non-positive eigenvalue."""

    def __init__(self, message, eigenvalue=None, index=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.index = index


class InvalidCorrelationError(ValueError):
    """Base class for correlation-matrix validation failures."""

    kind = "invalid"

    def __init__(self, message, lambda_min=None):
        super().__init__(message)
        self.lambda_min = lambda_min


class AsymmetryError(InvalidCorrelationError):
    kind = "symmetry"


class DiagonalError(InvalidCorrelationError):
    kind = "diagonal"


class OffDiagonalRangeError(InvalidCorrelationError):
    kind = "range"


class DefinitenessError(InvalidCorrelationError, NotPositiveDefiniteError):
    kind = "definiteness"

    def __init__(self, message, lambda_min=None):
        InvalidCorrelationError.__init__(self, message, lambda_min=lambda_min)
        self.eigenvalue = lambda_min
        self.index = 0


class ConvergenceError(RuntimeError):
    """The fixed-point iteration hit ``max_iter`` before the step fell below delta.

    The attached ``report`` holds the last iterate in ``report.x_star``; pass it
    back as ``x0`` to resume.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report

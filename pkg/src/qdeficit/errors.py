"""Exception types shared across the package."""


class QDeficitError(Exception):
    """Base class for all package errors."""


class DimensionError(QDeficitError, ValueError):
    """Operand shapes do not agree with the requested operation."""


class ParameterError(QDeficitError, ValueError):
    """A physical parameter lies outside its admissible range."""


class NumericalError(QDeficitError, ArithmeticError):
    """An iterative routine failed to converge."""


class DensityMatrixError(QDeficitError, ValueError):
    """A matrix failed density-matrix validation.

    ``magnitude`` holds the size of the offending deviation.
    """

    def __init__(self, message: str, magnitude: float):
        super().__init__(f"{message} (magnitude {magnitude:.3e})")
        self.magnitude = magnitude


class NotHermitianError(DensityMatrixError):
    pass


class TraceNotOneError(DensityMatrixError):
    pass


class NotPositiveError(DensityMatrixError):
    pass

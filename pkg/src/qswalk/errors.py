"""Exception hierarchy shared by the library and the CLI."""


class QSWalkError(Exception):
    """Base class for all library errors."""


class InvalidSizeError(QSWalkError, ValueError):
    pass


class DimensionMismatchError(QSWalkError, ValueError):
    pass


class InvalidStateError(QSWalkError, ValueError):
    """A matrix failed the density-matrix checks (Hermitian, unit trace, PSD)."""


class NumericalError(QSWalkError, ArithmeticError):
    """Matrix exponential or propagation produced an unusable result."""


class TruncationError(QSWalkError):
    """Light-cone guard tripped: probability reached the edge of a truncated line."""


class SeriesDivergenceError(QSWalkError, ArithmeticError):
    pass


class QuadratureAccuracyError(QSWalkError, ArithmeticError):
    pass


class FitError(QSWalkError, ValueError):
    pass

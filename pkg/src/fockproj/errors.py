"""Exception types shared across the package."""


class FockprojError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(FockprojError, ValueError):
    """Matrix or vector has the wrong shape, parity, or an unsupported size."""


class DomainError(FockprojError, ValueError):
    """Input lies outside the mathematical domain of the operation."""


class AdmissibilityError(DomainError):
    """Matrix is not admissible: real part fails strict positive definiteness."""


class SingularMatrixError(FockprojError, ValueError):
    """Matrix is numerically singular.  Carries the offending determinant."""

    def __init__(self, message: str, det: complex):
        super().__init__(message)
        self.det = det


class DegreeError(DomainError):
    """Polynomial degree exceeds the supported cap."""


class ConvergenceError(FockprojError, RuntimeError):
    """Iterative procedure failed to reach its tolerance within budget."""


class CounterexampleError(FockprojError, RuntimeError):
    """A sampled point violated a property that should hold everywhere.

    Carries the offending sample so the case can be replayed.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness

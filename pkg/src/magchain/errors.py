"""Exception taxonomy shared across the package."""


class MagchainError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(MagchainError, ValueError):
    """An argument is outside the documented domain of an operation."""


class SingularEvaluationError(MagchainError, ArithmeticError):
    """Evaluation was requested at (or too close to) a singular point."""


class BoundaryLayerError(MagchainError, ValueError):
    """Continuum expressions were requested inside an end boundary layer
    of an open chain, where the interior expansion is not valid."""


class DivergentFunctionalError(MagchainError, ArithmeticError):
    """The requested functional does not converge for this geometry
    (e.g. the nonlocal energy integral of an open chain)."""


class ConstraintFailureError(MagchainError, RuntimeError):
    """Constraint projection failed to reach the required residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NonConvergenceError(MagchainError, RuntimeError):
    """An iterative solver hit its iteration cap; carries the best iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class NumericalFailureError(MagchainError, ArithmeticError):
    """A quadrature or fit did not reach its declared tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class IOFailureError(MagchainError, OSError):
    """File output failed; carries the offending path."""

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path

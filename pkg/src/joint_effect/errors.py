"""Exception types shared across the package.

The split matters for the CLI exit-code contract: data/parameter problems map
to exit 2, statistical inapplicability (a method that cannot run on this
input) maps to exit 3.
"""


class JointEffectError(Exception):
    """Base class for all package errors."""


class ParameterError(JointEffectError, ValueError):
    """Invalid parameter or argument outside its domain (exit 2)."""


class DataError(JointEffectError, ValueError):
    """Malformed or unusable input data (exit 2)."""


class MethodInapplicableError(JointEffectError, RuntimeError):
    """A statistical method cannot be applied to this input (exit 3)."""


class DegenerateSplitError(MethodInapplicableError):
    """A joint-median split part has fewer than 2 observations."""


class DegenerateDataError(MethodInapplicableError):
    """Data carries no usable variation (e.g. all values identical)."""


class SeparationError(MethodInapplicableError):
    """Perfectly separated samples; resampling-based methods stop here."""


class SingularCovarianceError(MethodInapplicableError):
    """Bootstrap covariance matrix is singular (zero spread in a coordinate)."""


class NonPositiveDefiniteError(MethodInapplicableError):
    """Estimated covariance matrix has negative determinant."""


class EmptyRegionError(MethodInapplicableError):
    """A confidence rectangle does not intersect the feasible region."""


class AccuracyError(JointEffectError, ArithmeticError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved

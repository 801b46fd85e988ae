"""Exception hierarchy shared by all modules."""


class SuperpropError(Exception):
    """Base class for every error raised by this package."""


class NonConvergence(SuperpropError):
    """Quadrature refinement levels failed to agree within tolerance."""


class QuadratureFailure(NonConvergence):
    """A quadrature needed to build curve data or kernels did not converge."""


class Singular(SuperpropError):
    """Matrix pivot fell below the singularity threshold."""


class NotSymmetric(SuperpropError):
    pass


class TailBoundFailure(SuperpropError):
    """Theta truncation radius exceeds the configured cap."""


class FrameInvariantViolation(SuperpropError):
    pass


class MismatchError(SuperpropError):
    """Two independent routes to the same quantity disagree."""


class SingularHalfPeriod(SuperpropError):
    pass


class DegenerateTransform(SuperpropError):
    pass


class DiagonalSingularity(SuperpropError):
    """Kernel requested at (numerically) coincident points."""


class ZeroDenominator(SuperpropError):
    """A mirror-map denominator vanished away from the diagonal."""

"""Exception hierarchy shared by all skewrh modules."""


class SkewrhError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(SkewrhError):
    """Linear solve rejected: matrix singular or condition number too large."""


class NotSkewSymmetric(SkewrhError):
    """Pfaffian input is not skew-symmetric within tolerance."""


class OddDimension(SkewrhError):
    """Pfaffian input has odd dimension."""


class NotInImage(SkewrhError):
    """Polynomial is not in the image of the dual map."""


class NoConvergence(SkewrhError):
    """Adaptive quadrature failed to converge at maximum panel depth."""


class PointOnContour(SkewrhError):
    """Evaluation point lies on (or too close to) the integration contour."""


class PointNearIntersection(SkewrhError):
    """Jump evaluation point is too close to a contour self-intersection."""


class ConditioningFailure(SkewrhError):
    """Orthogonal-basis construction lost too many digits."""


class OutOfRange(SkewrhError):
    """Index outside the range held by the constructed object."""


class DenominatorVanishing(SkewrhError):
    """A quantity asserted to be nonzero fell below threshold."""


class ConfigInvalid(SkewrhError):
    """Run configuration failed validation."""


class ToleranceExceeded(SkewrhError):
    """At least one residual exceeded its documented tolerance."""


class IoFailure(SkewrhError):
    """Table emission failed."""

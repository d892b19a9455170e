"""Exception types shared across the package."""


class RingPatternError(Exception):
    """Base class for all errors raised by this package."""


class DisconnectedComplex(RingPatternError):
    """The given squares do not form an edge-connected complex."""


class NotSimplyConnected(RingPatternError):
    """The complex has holes (Euler characteristic differs from 1)."""


class NonZigzagBoundary(RingPatternError):
    """A boundary vertex of degree 4 is present.

    Such complexes can be built and laid out, but the variational solver
    refuses them: the boundary-value formulation assumes every boundary
    vertex has degree 2 or 3.
    """


class NotInterior(RingPatternError):
    """Operation requires an interior vertex."""


class NegativeArgument(RingPatternError):
    """The inverse tangent integral is only evaluated for y >= 0."""


class MissingWeight(RingPatternError):
    """A vertex weight vector does not cover every vertex of the complex."""


class PhiSumMismatch(RingPatternError):
    """Prescribed boundary angle sums are incompatible with a flat pattern."""


class SingularHessian(RingPatternError):
    """Reduced Hessian could not be factorized (invalid input or a bug)."""


class NonpositiveRadius(RingPatternError):
    """Radius propagation produced a non-positive radius."""


class ClosureViolation(RingPatternError):
    """A field does not satisfy the closure condition well enough to lay out."""


class InconsistentPropagation(RingPatternError):
    """Two propagation routes disagree on a center position."""

"""Exception types raised by the geometry pipeline."""


class MrootGeomError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(MrootGeomError):
    """A direction or tensor does not match the metric's dimension."""


class UnsupportedOrder(MrootGeomError):
    """Derivative order outside the supported range 0..4."""


class DegenerateForms(MrootGeomError):
    """The rows of a product metric are not linearly independent."""


class DegenerateDomain(MrootGeomError):
    """The defining polynomial vanishes (or has the wrong sign) at the point."""


class ZeroBase(MrootGeomError):
    """A power of the polynomial value was requested where it is zero."""


class SingularMetric(MrootGeomError):
    """The fundamental tensor (or its Hessian factor) is numerically singular."""


class ZeroKappa(MrootGeomError):
    """The Einstein constant must be nonzero."""


class NotApplicableDimension(MrootGeomError):
    """The requested operation is only defined for dimension n > 2."""


class HyperplaneSingularity(MrootGeomError):
    """A closed-form fixture divides by a vanishing coordinate component."""


class StepUnderflow(MrootGeomError):
    """Finite-difference steps shrank below machine-precision usefulness."""


class ShapeMismatch(MrootGeomError):
    """Two tensors passed to a comparison do not have the same shape."""

"""Exception taxonomy shared by all modules.

Every error raised on purpose by this package derives from ``KernelError``
so callers can distinguish contract violations from genuine bugs.
"""


class KernelError(ValueError):
    """Base class for all deliberate failures raised by this package."""


class NoSignChange(KernelError):
    """Root bracket endpoints do not straddle a sign change."""


class NoConvergence(KernelError):
    """Iteration budget exhausted before reaching the requested tolerance."""


class ToleranceNotMet(KernelError):
    """Adaptive quadrature could not certify the requested tolerance."""


class DivergentIntegrand(KernelError):
    """Declared endpoint exponent makes the integral non-integrable."""


class OutOfRange(KernelError):
    """Target value lies outside the range of a monotone function."""


class StencilOutOfDomain(KernelError):
    """A finite-difference stencil would sample outside the given domain."""


class OutOfDomain(KernelError):
    """Coordinate outside the valid open interval of the family."""


class NonPositiveXi(OutOfDomain):
    """The radial coordinate of the intrinsic family must be positive."""


class NonPositiveKappa(OutOfDomain):
    """The profile curvature parameter must be positive."""


class NonPositiveHeight(KernelError):
    """Upper half-space points need a positive height coordinate."""


class DenominatorUnderflow(KernelError):
    """Model conversion hit a vanishing denominator (invalid input point)."""


class TableNotFrozen(KernelError):
    """A family was used before its lookup table was built."""


class NegativeRadicand(KernelError):
    """Square-root argument went non-positive inside a quadrature."""


class RadicandNonPositive(NegativeRadicand):
    """Radius formula radicand must stay positive on the open interval."""


class ZeroCaseHasNoR(KernelError):
    """The vanishing-constant family has no radius function."""


class WrongCase(KernelError):
    """Operation only applies to a different sign case."""


class HyperboloidConstraintViolated(KernelError):
    """A constructed point left the unit hyperboloid (formula or branch bug)."""


class DegenerateSegment(KernelError):
    """Arc-length reparametrization found a zero-length segment."""


class DegenerateMetric(KernelError):
    """First fundamental form is numerically singular."""


class NormalUndefined(KernelError):
    """Unit normal could not be built from the tangent plane."""


class GradientTooSmall(KernelError):
    """Frame equations are undefined where the mean curvature is critical."""


class GlueMismatch(KernelError):
    """One-sided derivatives disagree at the gluing point."""

    def __init__(self, order: int, gap: float):
        self.order = order
        self.gap = gap
        super().__init__(f"derivative order {order} mismatch at gluing point: {gap:.3e}")


class SelfIntersection(KernelError):
    """Glued profile polyline intersects itself."""


class CertificateFailed(KernelError):
    """Completeness certificate found an offending sample."""

    def __init__(self, omega: float, message: str):
        self.omega = omega
        super().__init__(f"{message} (at omega={omega!r})")


class NonFiniteVertex(KernelError):
    """Mesh export encountered a NaN or infinite vertex."""

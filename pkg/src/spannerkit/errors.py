"""Exception types shared across the package."""


class SpannerKitError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameter(SpannerKitError):
    """A caller-supplied argument is outside the supported domain."""


class DegenerateInput(SpannerKitError):
    """The point set violates the general-position assumptions."""


class AlreadyArrived(SpannerKitError):
    """A routing query was issued with source equal to target."""


class InternalInvariantViolation(SpannerKitError):
    """A condition the algorithms guarantee on clean inputs failed to hold."""

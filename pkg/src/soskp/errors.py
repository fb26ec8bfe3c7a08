"""Exception types shared across the package."""


class SoskpError(Exception):
    """Base class for library errors."""


class KindMismatchError(SoskpError):
    """Mixed rational/hpfloat polynomial operands; convert explicitly."""


class QParseError(SoskpError):
    """Threshold literal not in the accepted grammar."""

    GRAMMAR = (
        "accepted q literals: integer ('3'), decimal ('2.25'), "
        "fraction ('9/4'), or dyadic shorthand 'k+2^-e' (e.g. '1+2^-20', '2^-30')"
    )


class RegimeError(SoskpError):
    """Instance outside the regime a construction covers."""


class InvalidCertificateError(SoskpError):
    """Certificate violates a precondition of the requested operation."""


class LiftingError(SoskpError):
    """Interval nonnegativity decomposition failed at the given budget."""


class PrecisionEscalationNeeded(SoskpError):
    """Numerical residual too large; retry at higher precision."""


class SizeGuardError(SoskpError):
    """Problem size exceeds a configured guard."""

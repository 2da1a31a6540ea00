"""Exception hierarchy shared by all tamelab modules."""


class TamelabError(Exception):
    """Base class for every error raised by this package."""


class PrecisionMismatch(TamelabError):
    """Operands live in different rings (prime, precision, or variables differ)."""


class NonUnit(TamelabError):
    """Inversion of an element with positive valuation."""


class NonResidue(TamelabError):
    """Square root requested for a non-square residue."""


class DomainError(TamelabError):
    """Argument outside the domain of a p-adic special function."""


class NonUnitDeterminant(TamelabError):
    """Matrix inversion requested for a matrix whose determinant is not a unit."""


class DepthError(TamelabError):
    """Operation requires a matrix congruent to the identity modulo the maximal ideal."""


class LimitExceeded(TamelabError):
    """Group enumeration grew past the configured element cap."""


class NotPGroup(TamelabError):
    """Enumerated group order is not a power of the ring's prime."""


class WindowTooLarge(TamelabError):
    """Requested filtration window exceeds the precision-trust headroom."""


class InsufficientPrecision(TamelabError):
    """Limit computation did not stabilize within the available precision."""


class ZeroVector(TamelabError):
    """A nonzero vector was required."""


class RingMismatch(TamelabError):
    """Certificate pieces live over different coefficient rings."""


class CertificateInvalid(TamelabError):
    """The defining identity of an inertial certificate fails."""


class TameRelationFailed(TamelabError):
    """A verified certificate produced a plan whose tame relation fails.

    This can only happen through a precision shortfall, so it halts loudly
    instead of being reported as an ordinary failed check.
    """


class NotNonresidue(TamelabError):
    """Quaternion parameter must be a quadratic nonresidue mod p."""


class InvalidSignature(TamelabError):
    """Arithmetic-bound input with an impossible signature (r1, r2, norms)."""


class SchemaError(TamelabError):
    """Malformed JSON input."""

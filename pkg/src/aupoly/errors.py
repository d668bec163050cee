"""Exception types shared across the package."""


class AupolyError(Exception):
    """Base class for all package-specific errors."""


class NotPositiveDefinite(AupolyError):
    """A Gram matrix failed the leading-principal-minor test."""


class NonIntegralValues(AupolyError):
    """The shifted lattice takes non-integer values."""


class CompositeNormIdeal(AupolyError):
    """The norm ideal is not generated by a positive power of a single prime."""


class EvenPrime(AupolyError):
    """The norm ideal is a power of 2 (out of scope)."""


class ConductorMismatch(AupolyError):
    """The conductor is not the expected power of p."""


class InternalBasisFailure(AupolyError):
    """Superlattice basis construction failed an internal consistency check."""


class ZeroInput(AupolyError):
    """Valuation of zero requested."""


class DegenerateForm(AupolyError):
    """A local form has a zero coefficient."""


class PrecisionTooLow(AupolyError):
    """Requested working precision cannot certify the computation."""


class ShapeViolation(AupolyError):
    """Jordan data does not have the shape required by the operation."""


class NotUniversalAt2(AupolyError):
    """Primitive representation classification requires 2-adic universality."""


class InternalParity(AupolyError):
    """Square-class bookkeeping reached a state the theory excludes."""


class BudgetExceeded(AupolyError):
    """Enumeration work budget exhausted; partial results are not authoritative."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

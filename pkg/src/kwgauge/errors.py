"""Exception types shared across the package."""


class KWGaugeError(Exception):
    """Base class for all package errors."""


class CapExceeded(KWGaugeError):
    """An enumeration or state space exceeds its configured cap."""


class NotAbelian(KWGaugeError):
    """An abelian-only operation was called on a nonabelian group."""


class DiagonalizationFailed(KWGaugeError):
    """Class-sum diagonalization stayed degenerate after all retries."""


class InvalidLattice(KWGaugeError):
    """A lattice violates its combinatorial invariants."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)


class RequiresClosedSurface(KWGaugeError):
    """The operation needs every edge to bound exactly two faces."""


class RequiresDual(KWGaugeError):
    """A dual lattice is needed but was not supplied."""


class NotABoundary(KWGaugeError):
    """A disorder assignment is not a coboundary.

    Attributes:
        obstruction: reduced coordinates of the class in H^2.
    """

    def __init__(self, message, obstruction=None):
        super().__init__(message)
        self.obstruction = obstruction


class UseTuraevViroBackend(KWGaugeError):
    """Nonabelian order data requires the state-sum backends."""


class NotEven(KWGaugeError):
    """An Ising action vector is not invariant under the duality involution."""


class ValidationError(KWGaugeError):
    """Malformed input data."""

"""Exception hierarchy shared by all modules."""


class StableGeoError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(StableGeoError, ValueError):
    """Malformed combinatorial or lattice data (dimension mismatch, parity, ...)."""


class UnsupportedError(StableGeoError):
    """The operation is not defined for this kind of input."""


class PreconditionError(StableGeoError, ValueError):
    """Input is well formed but violates the operation's precondition."""


class RangeError(PreconditionError):
    """Parameters outside the range where a construction is known."""

"""Exception types raised by locc_volumes."""


class LoccVolumesError(Exception):
    """Base class for all library errors."""


class InvalidState(LoccVolumesError, ValueError):
    pass


class NotNormalized(InvalidState):
    pass


class Biseparable(InvalidState):
    pass


class OutOfRange(InvalidState):
    pass


class WrongClass(LoccVolumesError, ValueError):
    pass


class PreconditionViolated(LoccVolumesError, ValueError):
    pass


class DimensionMismatch(LoccVolumesError, ValueError):
    pass


class DimensionTooLarge(LoccVolumesError, ValueError):
    pass


class UnsupportedCase(LoccVolumesError, ValueError):
    pass


class NumericalError(LoccVolumesError, ArithmeticError):
    """Numerical routine failed to reach its tolerance."""


class NotConverged(NumericalError):
    pass


class CubatureNotConverged(NotConverged):
    pass


class InversionError(LoccVolumesError, ValueError):
    pass


class Inconsistent(InversionError):
    pass


class NonPhysicalRoot(InversionError):
    pass


class BitRequired(InversionError):
    pass


class NoSecondCandidate(InversionError):
    pass


class AmbiguousInversion(InversionError):
    """More than one valid state reproduces the given measures.

    ``candidates`` holds every state found.
    """

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)

"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes, see :mod:`aztec_lshape.cli`.
"""


class AztecError(Exception):
    """Base class for all package errors."""


class ParameterError(AztecError, ValueError):
    """A parameter is outside its admissible range.

    ``bound`` names the violated constraint, e.g. ``"1 <= m <= N"``.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class StructureError(AztecError):
    """Malformed geometric input, e.g. a domino made of non-adjacent cells."""


class CapacityError(AztecError):
    """A size guard was exceeded (exhaustive enumeration on a big region)."""


class UntileableError(AztecError, ZeroDivisionError):
    """An operation needed a nonzero tiling count of an untileable region."""


class RegimeError(AztecError):
    """Parameters fall outside the validity range of an asymptotic regime."""


class AccuracyError(AztecError):
    """A numerical routine could not reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved

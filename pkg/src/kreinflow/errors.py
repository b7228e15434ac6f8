"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`KreinError`,
so callers (the CLI in particular) can separate bad input from bugs.
"""


class KreinError(Exception):
    """Base class for all library errors."""


class InputError(KreinError, ValueError):
    """Malformed input: wrong shape, non-finite entries, bad parameters."""


class DimensionMismatchError(InputError):
    pass


class VerificationError(KreinError):
    """A computed object failed one of its post-condition checks."""


# numerics
class NotHermitianError(InputError):
    pass


class NoConvergenceError(KreinError):
    pass


class NotMetricSelfAdjointError(InputError):
    pass


class NonPositiveSpectrumError(KreinError):
    pass


class SingularError(KreinError):
    pass


class NotPositiveDefiniteError(InputError):
    pass


class LogBranchAmbiguityError(KreinError):
    pass


# krein_core
class EverythingIsotropicError(KreinError):
    pass


class NotIndefiniteError(KreinError):
    pass


class DegenerateSpaceError(KreinError):
    pass


class NotPositiveSubspaceError(KreinError):
    pass


class NotNegativeSubspaceError(KreinError):
    pass


class NotOrthogonalError(KreinError):
    pass


class WrongDimensionsError(InputError):
    pass


# cone_ops
class SamplingExhaustedError(KreinError):
    pass


class NotPositiveError(KreinError):
    pass


class InconsistentOracleError(KreinError):
    pass


class NotDefinedError(KreinError):
    pass


class SingularOperatorError(KreinError):
    pass


class NonPositiveModulusError(InputError):
    pass


# dynamics
class NegativeTimeError(InputError):
    pass


class NotPositiveBijectionError(KreinError):
    pass


class ExponentialLawViolationError(KreinError):
    pass


class UnitarityResidualError(VerificationError):
    pass


class NeutralEigenvectorError(KreinError):
    pass


class NotDiagonalizableError(KreinError):
    pass


# models
class GridMismatchError(InputError):
    pass


class AsymmetricGridError(InputError):
    pass


class TimeOutOfRangeError(InputError):
    pass


class GridTooNarrowError(KreinError):
    pass


class ShiftNotZeroError(KreinError):
    pass

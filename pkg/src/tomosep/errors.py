"""Exception hierarchy.

Every error raised by the library derives from :class:`TomosepError` so callers
(and the command line front end) can catch the whole family at once.
Input-shape and input-invariant problems are also ``ValueError`` subclasses.
"""


class TomosepError(Exception):
    """Base class for all library errors."""


class InvalidInput(TomosepError, ValueError):
    """An argument violates a documented precondition."""


class NumericFailure(TomosepError, ArithmeticError):
    """An iterative numerical routine failed."""


class NoConvergence(NumericFailure):
    pass


class NotHermitian(InvalidInput):
    pass


class NotPSD(InvalidInput):
    pass


class NotUnitary(InvalidInput):
    pass


class DimMismatch(InvalidInput):
    pass


class LengthMismatch(InvalidInput):
    pass


class ShapeMismatch(InvalidInput):
    pass


class Singular(InvalidInput):
    pass


class InvalidState(InvalidInput):
    """A matrix fails the density-matrix contract (Hermitian, unit trace, PSD)."""


class BlochOutOfBall(InvalidInput):
    pass


class OutOfRange(InvalidInput):
    pass


class NotADistribution(InvalidInput):
    pass


class NotBipartite(InvalidInput):
    pass


class IncompleteKraus(InvalidInput):
    pass


class NormalizationFail(InvalidInput):
    pass


class DegenerateFiducial(InvalidInput):
    pass


class FrameIncomplete(InvalidInput):
    pass


class BadSpin(InvalidInput):
    pass


class DirectionsDegenerate(InvalidInput):
    pass


class PatternMismatch(InvalidInput):
    pass


class BadMapSample(InvalidInput):
    pass


class BadMap(InvalidInput):
    pass


class NonpositiveTrace(InvalidInput):
    pass


class ParseError(TomosepError, ValueError):
    """Malformed matrix file or channel specification."""

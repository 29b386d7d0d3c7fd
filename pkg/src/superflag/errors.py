"""Exception hierarchy shared by all modules."""


class SuperflagError(Exception):
    """Base class for every error raised by the package."""


class ParityMismatch(SuperflagError):
    pass


class ShapeMismatch(SuperflagError):
    pass


class NonHomogeneous(SuperflagError):
    pass


class NotNumericCore(SuperflagError):
    """The constant part of a supermatrix is singular."""


class NonNilpotentRemainder(SuperflagError):
    """The non-constant part of a supermatrix has purely even monomials."""


class ZeroDenominator(SuperflagError):
    pass


class ChainViolation(SuperflagError):
    pass


class MaximalTypeViolation(SuperflagError):
    pass


class KindMismatch(SuperflagError):
    pass


class UnsupportedChart(SuperflagError):
    pass


class SingularOverlap(SuperflagError):
    """The evaluation point lies off the overlap of two charts."""


class NotInAlgebra(SuperflagError):
    pass


class ChartMismatch(SuperflagError):
    pass


class NotDominant(SuperflagError):
    pass


class ExcludedCase(SuperflagError):
    pass


class AnsatzTooLarge(SuperflagError):
    pass


class UnknownSuite(SuperflagError):
    pass


class UnstableDegree(SuperflagError):
    """Oracle dimensions differ between two consecutive degree bounds."""

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper

"""Exception types raised across the package."""


class CullenSumsError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(CullenSumsError):
    """Certification failed even at the maximum working precision."""


class RepeatedRoots(CullenSumsError):
    """The characteristic polynomial has a root of multiplicity > 1."""


class DivisionByZeroSymbol(CullenSumsError):
    """A height expression divides by an algebraic number equal to zero."""


class NonPositiveGamma(CullenSumsError):
    """A linear-form base is not certified to be a positive real number."""


class MissingAValues(CullenSumsError):
    """Matveev's bound was requested without computable bases or replay A-values."""


class DegenerateDominantCoefficient(CullenSumsError):
    """The Binet coefficient of the dominant root vanishes exactly."""


class Divergence(CullenSumsError):
    """Fixed-point resolution did not stabilise."""


class SingularBasis(CullenSumsError):
    """A lattice basis is linearly dependent."""


class ScaleCapExceeded(CullenSumsError):
    """Lattice reduction stayed inconclusive up to the maximum scale.

    ``subproblem`` identifies the offending piece of a campaign and
    ``report`` carries whatever was certified before the failure.
    """

    def __init__(self, message, subproblem=None, report=None):
        super().__init__(message)
        self.subproblem = subproblem
        self.report = report


class HypothesisFailure(CullenSumsError):
    """The recurrence does not satisfy the hypotheses of the effective bound.

    ``report`` holds the :class:`~cullen_sums.recurrence.HypothesisReport`.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report

"""Exception hierarchy for the solver."""


class QDotError(Exception):
    """Base class for all solver errors."""


class DomainError(QDotError, ValueError):
    """Input outside the domain of a function (e.g. r <= 0)."""


class StepSizeError(QDotError):
    """The Numerov denominator vanished; refine the grid."""


class GridTooShortError(QDotError):
    """The outer grid edge is not classically forbidden; extend r_max."""


class BracketingError(QDotError):
    """No usable matching point exists for the requested energy."""


class MatchingError(QDotError):
    """The wavefunction kept vanishing at every candidate matching point."""


class RefinementError(QDotError):
    """Bisection lost the defect sign change (usually a grid artifact)."""


class StateNotFoundError(QDotError):
    """No state with the requested label was found."""


class BoundStateAmbiguityError(QDotError):
    """More than one negative-energy bracket was found."""


class ScanError(QDotError):
    """Some states of a spectrum scan failed to converge.

    ``results`` holds the states that did converge and ``failures`` a list of
    ``(bracket, node_count, exception)`` triples for the ones that did not.
    """

    def __init__(self, message, results, failures):
        super().__init__(message)
        self.results = results
        self.failures = failures

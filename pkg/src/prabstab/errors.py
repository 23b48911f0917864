"""Exception hierarchy.

Validation-type errors (bad inputs, contract violations) and numerical-failure
errors (iteration caps, unstable fits) are kept distinct so the CLI can map
them to different exit codes.
"""


class PrabstabError(Exception):
    """Base class for all library errors."""


class InvalidParam(PrabstabError):
    """A parameter violates its admissible range."""


class DomainError(PrabstabError):
    """An argument lies outside the domain of the requested operation."""


class BranchCutError(PrabstabError):
    """Evaluation was requested on the branch cut with a non-integer power."""


class SectorUnavailable(PrabstabError):
    """Exponential-branch coefficients beyond the configured order were requested."""


class NonConvergence(PrabstabError):
    """An iteration or summation hit its cap before reaching tolerance."""


# Root solves and series summation fail the same way; keep a single class.
NoConvergence = NonConvergence


class FitFailure(PrabstabError):
    """Least-squares coefficient matching left a residual above tolerance."""


class CountUndefined(PrabstabError):
    """Root counting was requested too close to the stability boundary."""


class ContourFailure(PrabstabError):
    """Adaptive contour refinement exceeded its budget."""


class ContourSingularity(PrabstabError):
    """A quadrature contour passed through (or too near) a singularity."""


class IllConditioned(PrabstabError):
    """A linear system was solved with an unacceptable residual."""


class NewtonDivergence(PrabstabError):
    """The per-step Newton iteration diverged despite damping."""


class NotAsymptotic(PrabstabError):
    """An asymptotic expansion was evaluated where its terms do not decay."""


class ValidationFailed(PrabstabError):
    """A computed result failed its a-posteriori verification check."""


class OutOfRange(PrabstabError):
    """The requested target is unreachable for every admissible parameter."""

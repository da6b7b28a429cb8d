"""Exception hierarchy shared by all modules."""


class InfoHolonomyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(InfoHolonomyError, ValueError):
    """A point lies outside the declared domain of a field or model."""


class NonFiniteError(InfoHolonomyError, ArithmeticError):
    """An intermediate value became NaN or infinite."""


class NotPositiveDefiniteError(InfoHolonomyError, ValueError):
    """A matrix that must be symmetric positive definite is not."""


class UnsupportedDimension(InfoHolonomyError, ValueError):
    pass


class DegeneratePlane(InfoHolonomyError, ValueError):
    """A coordinate 2-plane has (numerically) zero metric area."""


class NotAntisymmetric(InfoHolonomyError, ArithmeticError):
    """A curvature operator failed the g-antisymmetry check."""


class RankUnstable(InfoHolonomyError, ArithmeticError):
    """Singular values cluster at the rank threshold."""


class StepTooCoarse(InfoHolonomyError, ArithmeticError):
    """Halving the integration step changed the transport map too much."""


class LogUndefined(InfoHolonomyError, ArithmeticError):
    """The principal matrix logarithm does not exist or is unreliable."""


class HypothesesNotMet(InfoHolonomyError, ValueError):
    """Berger's table does not apply to the supplied evidence.

    Attributes
    ----------
    failed : list of str
        Names of the hypotheses that did not hold.
    """

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("Berger hypotheses unmet: " + ", ".join(self.failed))


class ConfigError(InfoHolonomyError, ValueError):
    """Invalid run configuration; ``where`` names the offending field or line."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)

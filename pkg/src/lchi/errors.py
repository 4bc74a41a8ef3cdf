"""Exception types shared across the package."""


class LchiError(Exception):
    """Base class for computational errors raised by this package."""


class PoleError(LchiError):
    """Evaluation requested exactly at a pole (e.g. zeta/L at s = 1)."""


class XFactorDomainError(LchiError):
    """The functional-equation factor has a genuine pole at the requested point."""


class NearZeroError(LchiError):
    """A quotient was requested too close to a zero of the denominator."""


class ZeroCoverageError(LchiError):
    """A zero list does not cover the ordinate range a sum requires."""


class PhaseContinuityError(LchiError):
    """The rotated Z-function failed its realness contract (branch jump)."""


class QuadratureError(LchiError):
    """Adaptive quadrature exhausted its refinement budget without converging."""

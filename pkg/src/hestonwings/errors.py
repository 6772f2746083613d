"""Exception hierarchy shared by all modules.

Every error carries a stable ``exit_code`` so the CLI can map failures to
documented process exit statuses: 2 for domain/admissibility problems,
3 for numerical (convergence/tolerance) problems.
"""


class HestonError(Exception):
    """Base class for all package errors."""

    exit_code = 3


class DomainError(HestonError):
    """An input violates a documented admissibility condition."""

    exit_code = 2


class NoExplosionError(DomainError):
    """No moment explosion on the requested side; the tail asymptotics degenerate."""


class ExplodedError(DomainError):
    """Transform requested at or beyond the moment-explosion time."""


class StripError(DomainError):
    """Contour abscissa outside the fundamental strip of the transform."""


class ArbitrageError(DomainError):
    """Option price outside the static no-arbitrage interval."""


class BranchError(HestonError):
    """Complex-logarithm continuity tracking failed in the closed-form transform."""


class ToleranceError(HestonError):
    """A quadrature or ODE step could not meet the requested tolerance."""


class ConvergenceError(HestonError):
    """An iterative solver failed to converge."""


class NegativeMassError(HestonError):
    """Contour integral for the density came out non-positive (truncation too small)."""


class BoundsError(HestonError):
    """Computed price violates its hard bounds by more than the quadrature tolerance."""

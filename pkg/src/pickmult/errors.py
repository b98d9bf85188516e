"""Exception hierarchy.

Two branches matter for the CLI exit-code contract: ConfigError descendants mean
the input was unusable (exit code 2), NumericalError descendants mean a
computation could not be completed or certified (exit code 3). Assertion-style
outcomes (a check that ran and failed) are never exceptions; they live in
experiment reports.
"""


class PickmultError(Exception):
    """Base class for all package errors."""


class ConfigError(PickmultError):
    """Invalid input: bad shapes, out-of-domain points, malformed configs."""


class DimensionMismatchError(ConfigError):
    """Points or value lists of inconsistent dimension or length."""


class BallMembershipError(ConfigError):
    """A point lies on or outside the unit sphere (within eps_ball)."""


class DuplicateNodeError(ConfigError):
    """Two nodes coincide within tol_node."""


class SeparatorOverlapError(ConfigError):
    """The two samples handed to separator_bound share a node; the
    interpolation data 1-on-A, 0-on-B is then infeasible."""


class GridResolutionError(ConfigError):
    """Boundary grid too coarse for the requested mode count and map degree."""


class NumericalError(PickmultError):
    """A numerical procedure failed or could not certify its postcondition."""


class NonHermitianError(NumericalError):
    """Matrix handed to a Hermitian-only routine is not Hermitian within tol_herm."""


class FactorizationError(NumericalError):
    """Cholesky failed at every rung of the jitter ladder."""


class PsdViolationError(NumericalError):
    """A matrix that must be PSD has an eigenvalue below the tolerance floor."""


class TransversalityError(NumericalError):
    """Transversality margin not certified positive where an operator needs it."""


class InjectivityError(NumericalError):
    """Boundary injectivity precondition failed where an operator needs it."""


class IntegrandBlowupError(NumericalError):
    """The kernel integrand is evaluated too close to its singularity."""

"""Exception types shared across the package.

Each class marks one failure mode of the solver pipeline; the CLI maps them
onto exit codes (argument errors 1, integration errors 2, bracketing and
convergence errors 3, verification failures 4).
"""

from __future__ import annotations


class Collinear4Error(Exception):
    """Base class for all package-specific errors."""


class NegativeCoordinate(Collinear4Error, ValueError):
    """A Cartesian or canonical state violates the ordering x1 > x2 > 0."""


class InvalidR(Collinear4Error, ValueError):
    """Initial separation parameter R is not a positive finite number."""


class CollisionSingularity(Collinear4Error, ValueError):
    """An unregularized quantity was requested at a collision configuration."""


class TotalCollapse(Collinear4Error):
    """Both binaries collapsed simultaneously (Q1 = Q2 = 0); not regularizable."""


class IntegrationError(Collinear4Error):
    """Base class for failures inside the regularized flow integrator."""


class HorizonExceeded(IntegrationError):
    """The requested event did not occur before the fictitious-time horizon."""


class StepUnderflow(IntegrationError):
    """Adaptive step size collapsed below the hard floor of 1e-14."""


class NoSignChange(IntegrationError):
    """Event refinement was asked to bisect a bracket without a sign change."""


class BracketFailure(Collinear4Error):
    """No sign-changing bracket for the shooting residual could be established."""


class NoConvergence(Collinear4Error):
    """Root finding exhausted its iteration budget without meeting tolerance."""


class CheckpointMismatch(Collinear4Error):
    """A constructed periodic orbit missed a quarter-period checkpoint state."""


class NoSafeArc(Collinear4Error):
    """No collision-free sub-arc was found for Newtonian cross-validation."""

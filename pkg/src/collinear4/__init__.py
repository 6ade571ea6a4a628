"""Regularized simulator and periodic-orbit solver for the symmetric
collinear four-body problem.

Four bodies with masses 1, m, m, 1 sit on a line at x1, x2, -x2, -x1 with
total energy -1. A Levi-Civita-style transformation regularizes both the
inner binary collision (BC) and the simultaneous binary collision (SBC),
so trajectories pass smoothly through collisions in a fictitious time s.
A shooting method on the initial outer parameter R locates the periodic
orbit that alternates BC and SBC every quarter-period.
"""

from __future__ import annotations

from .bounds import (
    A0Estimate,
    TurningPoint,
    a0_analytic_bound,
    a0_estimate,
    detect_turning_point,
    numeric_a0,
    solve_turning_quartic,
    turning_quartic,
)
from .dynamics import (
    ENERGY,
    bc_initial_state,
    gamma,
    hamiltonian_canonical,
    hamiltonian_cartesian,
    newtonian_accel,
    regularized_vector_field,
    sbc_p1_magnitude,
)
from .errors import (
    BracketFailure,
    CheckpointMismatch,
    Collinear4Error,
    CollisionSingularity,
    HorizonExceeded,
    IntegrationError,
    InvalidR,
    NegativeCoordinate,
    NoConvergence,
    NoSafeArc,
    NoSignChange,
    StepUnderflow,
    TotalCollapse,
)
from .integrator import (
    EventHit,
    IntegratorConfig,
    StopCondition,
    Trajectory,
    first_sbc,
    integrate,
)
from .model import (
    COLLISION_TOL,
    CanonicalState,
    CartesianState,
    CollisionKind,
    CollisionMarker,
    RegularizedState,
    canonical_to_cartesian,
    canonical_to_regularized,
    cartesian_to_canonical,
    regularized_to_canonical,
    regularized_to_cartesian,
    validate_mass_ratio,
)
from .shooting import (
    PeriodicOrbit,
    ShootingResult,
    build_period,
    default_bracket,
    find_periodic_R,
    residual,
)
from .trajfile import (
    read_trajectory_csv,
    write_trajectory_csv,
)
from .verify import (
    CheckResult,
    VerificationReport,
    build_report,
    check_crossval,
    check_energy,
    check_gamma,
    check_monotone_x2,
    check_sum_identity,
    cross_validate,
    sum_identity_rhs,
)

__version__ = "1.0.0"

__all__ = [
    "A0Estimate",
    "BracketFailure",
    "COLLISION_TOL",
    "CanonicalState",
    "CartesianState",
    "CheckResult",
    "CheckpointMismatch",
    "Collinear4Error",
    "CollisionKind",
    "CollisionMarker",
    "CollisionSingularity",
    "ENERGY",
    "EventHit",
    "HorizonExceeded",
    "IntegrationError",
    "IntegratorConfig",
    "InvalidR",
    "NegativeCoordinate",
    "NoConvergence",
    "NoSafeArc",
    "NoSignChange",
    "PeriodicOrbit",
    "RegularizedState",
    "ShootingResult",
    "StepUnderflow",
    "StopCondition",
    "TotalCollapse",
    "Trajectory",
    "TurningPoint",
    "VerificationReport",
    "a0_analytic_bound",
    "a0_estimate",
    "bc_initial_state",
    "build_period",
    "build_report",
    "canonical_to_cartesian",
    "canonical_to_regularized",
    "cartesian_to_canonical",
    "check_crossval",
    "check_energy",
    "check_gamma",
    "check_monotone_x2",
    "check_sum_identity",
    "cross_validate",
    "default_bracket",
    "detect_turning_point",
    "find_periodic_R",
    "first_sbc",
    "gamma",
    "hamiltonian_canonical",
    "hamiltonian_cartesian",
    "integrate",
    "newtonian_accel",
    "numeric_a0",
    "read_trajectory_csv",
    "regularized_to_canonical",
    "regularized_to_cartesian",
    "regularized_vector_field",
    "residual",
    "sbc_p1_magnitude",
    "solve_turning_quartic",
    "sum_identity_rhs",
    "turning_quartic",
    "validate_mass_ratio",
    "write_trajectory_csv",
]

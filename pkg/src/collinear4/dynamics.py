"""Hamiltonians, the regularized Hamiltonian, and the equations of motion.

The reduced system has Hamiltonian

    H = p1**2 (1 + 1/m)/4 - p1 p2 / m + p2**2 / m
        - 2m/q1 - m**2/q2 - 2m/(q1+q2) - 1/(2 q1 + q2)

at fixed total energy E = -1. After the Levi-Civita substitution
q = Q**2, p = P/(2Q) and the time change dt/ds = q1 q2, the flow of H at
energy E is the flow of

    Gamma = (dt/ds) (H - E)

which is polynomial apart from two rational terms and vanishes identically
along physical trajectories. The vector field below is the analytic gradient
of Gamma (dQ = +dGamma/dP, dP = -dGamma/dQ); it is validated against central
finite differences of Gamma in the test suite.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import CollisionSingularity, InvalidR, TotalCollapse
from .model import (
    CanonicalState,
    CartesianState,
    RegularizedState,
    validate_mass_ratio,
)

# Total energy of every solver path in this package.
ENERGY = -1.0


class Derivative5(NamedTuple):
    """Derivatives of (Q1, Q2, P1, P2, t) with respect to fictitious time s."""

    dQ1: float
    dQ2: float
    dP1: float
    dP2: float
    dt: float


def hamiltonian_cartesian(st: CartesianState, m: float) -> float:
    """Total energy in Cartesian coordinates (kinetic of all four bodies plus
    the six pairwise Newtonian potentials, collapsed by symmetry)."""
    m = validate_mass_ratio(m)
    if st.x1 == st.x2 or st.x2 == 0.0:
        raise CollisionSingularity(
            f"Cartesian Hamiltonian undefined at collision x1={st.x1}, x2={st.x2}"
        )
    w1 = 2.0 * st.v1
    w2 = 2.0 * m * st.v2
    kinetic = 0.25 * w1 * w1 + w2 * w2 / (4.0 * m)
    potential = (
        -1.0 / (2.0 * st.x1)
        - m * m / (2.0 * st.x2)
        - 2.0 * m / (st.x1 + st.x2)
        - 2.0 * m / (st.x1 - st.x2)
    )
    return kinetic + potential


def hamiltonian_canonical(st: CanonicalState, m: float) -> float:
    """Same energy in the relative chart (q1, q2, p1, p2)."""
    m = validate_mass_ratio(m)
    if st.q1 == 0.0 or st.q2 == 0.0:
        raise CollisionSingularity(
            f"canonical Hamiltonian undefined at collision q1={st.q1}, q2={st.q2}"
        )
    kinetic = (1.0 + 1.0 / m) * st.p1 * st.p1 / 4.0 - st.p1 * st.p2 / m + st.p2 * st.p2 / m
    potential = (
        -2.0 * m / st.q1
        - m * m / st.q2
        - 2.0 * m / (st.q1 + st.q2)
        - 1.0 / (2.0 * st.q1 + st.q2)
    )
    return kinetic + potential


def gamma(st: RegularizedState, m: float, E: float = ENERGY) -> float:
    """Regularized Hamiltonian Gamma = q1 q2 (H - E) in Levi-Civita variables.

    Zero along every physical trajectory of energy E. The two rational terms
    are 0/0 at Q1 = Q2 = 0 and are defined there by their limit 0; total
    collapse itself is flagged by the integrator, not here.
    """
    m = validate_mass_ratio(m)
    Q1, Q2, P1, P2 = st.Q1, st.Q2, st.P1, st.P2
    Q1s = Q1 * Q1
    Q2s = Q2 * Q2
    d1 = Q1s + Q2s
    d2 = 2.0 * Q1s + Q2s
    rational = 0.0
    if d1 != 0.0:
        rational = -2.0 * m * Q1s * Q2s / d1 - Q1s * Q2s / d2
    return (
        Q2s * P1 * P1 / 16.0
        + (Q2s * P1 * P1 - 4.0 * Q1 * Q2 * P1 * P2 + 4.0 * Q1s * P2 * P2) / (16.0 * m)
        - m * m * Q1s
        - 2.0 * m * Q2s
        + rational
        - Q1s * Q2s * E
    )


def regularized_vector_field(st: RegularizedState, m: float, E: float = ENERGY) -> Derivative5:
    """Hamiltonian vector field of Gamma plus the clock equation dt/ds = q1 q2.

    Derived analytically from Gamma:
        dQ1/ds = +dGamma/dP1 = (1+m)/(8m) Q2^2 P1 - (1/4m) Q1 Q2 P2
        dQ2/ds = +dGamma/dP2 = (1/2m) Q1^2 P2 - (1/4m) Q1 Q2 P1
        dP1/ds = -dGamma/dQ1
        dP2/ds = -dGamma/dQ2
    """
    m = validate_mass_ratio(m)
    Q1, Q2, P1, P2 = st.Q1, st.Q2, st.P1, st.P2
    return _field(Q1, Q2, P1, P2, m, E)


def _field(
    Q1: float, Q2: float, P1: float, P2: float, m: float, E: float
) -> Derivative5:
    """Raw vector field on plain floats; hot path of the integrator."""
    Q1s = Q1 * Q1
    Q2s = Q2 * Q2
    d1 = Q1s + Q2s
    if d1 == 0.0:
        raise TotalCollapse("vector field undefined at Q1 = Q2 = 0")
    d2 = 2.0 * Q1s + Q2s
    inv_d1s = 1.0 / (d1 * d1)
    inv_d2s = 1.0 / (d2 * d2)
    dQ1 = (1.0 + m) / (8.0 * m) * Q2s * P1 - Q1 * Q2 * P2 / (4.0 * m)
    dQ2 = Q1s * P2 / (2.0 * m) - Q1 * Q2 * P1 / (4.0 * m)
    dP1 = (
        Q2 * P1 * P2 / (4.0 * m)
        - Q1 * P2 * P2 / (2.0 * m)
        + 2.0 * m * m * Q1
        + 4.0 * m * Q1 * Q2s * Q2s * inv_d1s
        + 2.0 * Q1 * Q2s * Q2s * inv_d2s
        + 2.0 * E * Q1 * Q2s
    )
    dP2 = (
        Q1 * P1 * P2 / (4.0 * m)
        - (1.0 + m) / (8.0 * m) * Q2 * P1 * P1
        + 4.0 * m * Q2
        + 4.0 * m * Q1s * Q1s * Q2 * inv_d1s
        + 4.0 * Q1s * Q1s * Q2 * inv_d2s
        + 2.0 * E * Q1s * Q2
    )
    return Derivative5(dQ1, dQ2, dP1, dP2, Q1s * Q2s)


def newtonian_accel(st: CartesianState, m: float):
    """Accelerations of the two right-half bodies from the raw equations of
    motion; the independent oracle for cross-validating the regularized flow."""
    m = validate_mass_ratio(m)
    if st.x1 == st.x2 or st.x2 == 0.0:
        raise CollisionSingularity(
            f"Newtonian field singular at x1={st.x1}, x2={st.x2}"
        )
    plus = st.x1 + st.x2
    minus = st.x1 - st.x2
    a1 = -1.0 / (4.0 * st.x1 * st.x1) - m / (plus * plus) - m / (minus * minus)
    a2 = -m / (4.0 * st.x2 * st.x2) - 1.0 / (plus * plus) + 1.0 / (minus * minus)
    return a1, a2


def bc_initial_state(R: float, m: float) -> RegularizedState:
    """State at a binary collision of the inner pair with outer separation
    parameter R: (Q1, Q2, P1, P2) = (R, 0, 0, 2 m^(3/2)) at t = s = 0.

    P2 is forced by Gamma = 0; the state satisfies it identically.
    """
    m = validate_mass_ratio(m)
    if not (isinstance(R, (int, float)) and math.isfinite(R) and R > 0):
        raise InvalidR(f"initial parameter R must be a positive finite number, got {R!r}")
    return RegularizedState(Q1=float(R), Q2=0.0, P1=0.0, P2=2.0 * m ** 1.5, t=0.0, s=0.0)


def sbc_p1_magnitude(m: float) -> float:
    """|P1| forced by Gamma = 0 at a simultaneous binary collision
    (Q1 = 0, P2 = 0): 8 m / sqrt(2 m + 2). Equals 4 at m = 1."""
    m = validate_mass_ratio(m)
    return 8.0 * m / math.sqrt(2.0 * m + 2.0)

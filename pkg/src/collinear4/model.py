"""Domain types and coordinate systems for the symmetric collinear four-body problem.

Four bodies with masses 1, m, m, 1 sit on a line at x1, x2, -x2, -x1 with the
configuration kept symmetric about the origin. Three coordinate systems are
used throughout the package:

* Cartesian: positions and velocities (x1, x2, v1, v2) of the right half.
* Canonical: relative coordinates q1 = x1 - x2, q2 = 2 x2 with momenta
  p1 = 2 v1, p2 = v1 + m v2 conjugate under the reduced Hamiltonian.
* Regularized: signed Levi-Civita coordinates Qi = sqrt(qi), Pi = 2 Qi pi,
  with physical time t carried as an extra integrated quantity and the flow
  parameterized by a fictitious time s (dt/ds = q1 q2).

Collisions of the inner pair (q2 = 0, "BC") and simultaneous collisions of
both binaries (q1 = 0, "SBC") are regular points of the flow in regularized
coordinates; mapping such states back to canonical or Cartesian coordinates
yields a CollisionMarker instead, because the momenta p diverge there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from .errors import NegativeCoordinate

# |Q| at or below this value is treated as a collision when mapping back to
# unregularized coordinates; kept below the event localization error.
COLLISION_TOL = 1e-10


class CollisionKind(Enum):
    """Which binary collision a state or event represents."""

    BC = "bc"
    SBC = "sbc"


def validate_mass_ratio(m: float) -> float:
    """Check that the inner-body mass ratio m is a positive finite number."""
    if not (isinstance(m, (int, float)) and math.isfinite(m) and m > 0):
        raise ValueError(f"mass ratio must be a positive finite number, got {m!r}")
    return float(m)


@dataclass(frozen=True)
class CartesianState:
    """Positions and velocities of the two right-half bodies at time t."""

    x1: float
    x2: float
    v1: float
    v2: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if not (self.x1 >= self.x2 >= 0.0):
            raise NegativeCoordinate(
                f"require x1 >= x2 >= 0, got x1={self.x1}, x2={self.x2}"
            )


@dataclass(frozen=True)
class CanonicalState:
    """Relative separation coordinates q1 = x1 - x2, q2 = 2 x2 with momenta."""

    q1: float
    q2: float
    p1: float
    p2: float
    t: float = 0.0

    def __post_init__(self) -> None:
        if self.q1 < 0.0 or self.q2 < 0.0:
            raise NegativeCoordinate(
                f"require q1 >= 0 and q2 >= 0, got q1={self.q1}, q2={self.q2}"
            )


@dataclass(frozen=True)
class RegularizedState:
    """Signed Levi-Civita state; smooth through BC and SBC.

    Q1 and Q2 may take either sign (double cover of q = Q**2); t is physical
    time integrated alongside via dt/ds = q1 q2, and s is the fictitious time
    at which the state was recorded.
    """

    Q1: float
    Q2: float
    P1: float
    P2: float
    t: float = 0.0
    s: float = 0.0

    def astuple(self) -> Tuple[float, float, float, float, float]:
        """Integration vector (Q1, Q2, P1, P2, t)."""
        return (self.Q1, self.Q2, self.P1, self.P2, self.t)


@dataclass(frozen=True)
class CollisionMarker:
    """Finite data of a regularized state whose unregularized momenta diverge.

    p1 is None at an SBC (q1 = 0), p2 is None at a BC (q2 = 0); the q values
    are always defined through q = Q**2.
    """

    kind: CollisionKind
    q1: float
    q2: float
    p1: Optional[float]
    p2: Optional[float]
    t: float = 0.0
    s: float = 0.0


def cartesian_to_canonical(st: CartesianState, m: float) -> CanonicalState:
    """Map Cartesian positions/velocities to the relative chart.

    q1 = x1 - x2, q2 = 2 x2, p1 = 2 v1, p2 = (2 v1 + 2 m v2) / 2.
    """
    m = validate_mass_ratio(m)
    return CanonicalState(
        q1=st.x1 - st.x2,
        q2=2.0 * st.x2,
        p1=2.0 * st.v1,
        p2=st.v1 + m * st.v2,
        t=st.t,
    )


def canonical_to_cartesian(st: CanonicalState, m: float) -> CartesianState:
    """Inverse of cartesian_to_canonical."""
    m = validate_mass_ratio(m)
    return CartesianState(
        x1=st.q1 + st.q2 / 2.0,
        x2=st.q2 / 2.0,
        v1=st.p1 / 2.0,
        v2=(2.0 * st.p2 - st.p1) / (2.0 * m),
        t=st.t,
    )


def canonical_to_regularized(
    st: CanonicalState, branch_signs: Tuple[float, float] = (1.0, 1.0), s: float = 0.0
) -> RegularizedState:
    """Levi-Civita map Qi = sign_i * sqrt(qi), Pi = 2 Qi pi.

    The branch signs choose the sheet of the double cover; collision states
    (qi = 0) map to Qi = 0 and lose the diverging momentum (Pi = 0).
    """
    s1 = 1.0 if branch_signs[0] >= 0 else -1.0
    s2 = 1.0 if branch_signs[1] >= 0 else -1.0
    if st.q1 < 0.0 or st.q2 < 0.0:
        raise NegativeCoordinate(f"q1={st.q1}, q2={st.q2} must be nonnegative")
    Q1 = s1 * math.sqrt(st.q1)
    Q2 = s2 * math.sqrt(st.q2)
    return RegularizedState(
        Q1=Q1,
        Q2=Q2,
        P1=2.0 * Q1 * st.p1,
        P2=2.0 * Q2 * st.p2,
        t=st.t,
        s=s,
    )


def regularized_to_canonical(st: RegularizedState):
    """Invert the Levi-Civita map: qi = Qi**2, pi = Pi / (2 Qi).

    Returns a CollisionMarker instead of a CanonicalState when either |Qi| is
    at or below COLLISION_TOL, since the corresponding momentum is undefined.
    """
    q1 = st.Q1 * st.Q1
    q2 = st.Q2 * st.Q2
    at_sbc = abs(st.Q1) <= COLLISION_TOL
    at_bc = abs(st.Q2) <= COLLISION_TOL
    if at_sbc or at_bc:
        kind = CollisionKind.SBC if at_sbc else CollisionKind.BC
        return CollisionMarker(
            kind=kind,
            q1=q1,
            q2=q2,
            p1=None if at_sbc else st.P1 / (2.0 * st.Q1),
            p2=None if at_bc else st.P2 / (2.0 * st.Q2),
            t=st.t,
            s=st.s,
        )
    return CanonicalState(
        q1=q1,
        q2=q2,
        p1=st.P1 / (2.0 * st.Q1),
        p2=st.P2 / (2.0 * st.Q2),
        t=st.t,
    )


def regularized_to_cartesian(st: RegularizedState, m: float):
    """Map a regularized state all the way to Cartesian coordinates.

    Returns a CollisionMarker when the state sits on a collision.
    """
    can = regularized_to_canonical(st)
    if isinstance(can, CollisionMarker):
        return can
    return canonical_to_cartesian(can, m)

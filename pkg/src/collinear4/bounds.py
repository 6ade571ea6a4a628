"""Monotonicity threshold of the inner body: quartic root, analytic lower
bound, turning-point detection, and numeric refinement.

For initial outer separation A = R**2 at or below a threshold A0(m), the inner
body's position x2 increases monotonically from the initial binary collision
up to the first simultaneous binary collision. A0 is bounded below by a
closed-form expression in the root a > 1 of

    a**4 - 2 a**2 - 16 a / m + 1 = 0,

and is refined here numerically as the edge of the no-turning-point region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import BracketFailure, NoSignChange
from .integrator import IntegratorConfig, StopCondition, Trajectory, integrate
from .model import CollisionKind, validate_mass_ratio
from .dynamics import bc_initial_state
from .rootfind import bracketed_root, expand_upward

# Samples per first-SBC span when scanning the reconstructed velocity of the
# inner body for a sign change; dense enough to resolve shallow dips near the
# threshold at the 1e-3 resolution the numeric bisection contract uses.
_SCAN_POINTS = 4000
_QUARTIC_A_MAX = 1e6
_A_HI_LIMIT = 1e3


@dataclass(frozen=True)
class TurningPoint:
    """First time the inner body's velocity switches from outward to inward."""

    t_star: float
    x2_at: float
    s_star: float


@dataclass(frozen=True)
class A0Estimate:
    """Quartic root, closed-form lower bound, and optional numeric threshold."""

    a_root: float
    analytic_bound: float
    numeric_threshold: Optional[float] = None


def turning_quartic(a: float, m: float) -> float:
    """The quartic whose root a > 1 parameterizes the analytic bound."""
    return a ** 4 - 2.0 * a * a - 16.0 * a / m + 1.0


def solve_turning_quartic(m: float) -> float:
    """Root a > 1 of the turning quartic, to residual 1e-12.

    The quartic is negative at a = 1 (value -16/m) and eventually positive,
    with a single sign change on (1, inf); the upper end of the bracket is
    grown geometrically until the sign flips.
    """
    m = validate_mass_ratio(m)
    lo = 1.0
    f_lo = turning_quartic(lo, m)
    try:
        hi, f_hi = expand_upward(
            lambda a: turning_quartic(a, m), 2.0, 2.0, _QUARTIC_A_MAX, +1.0
        )
    except NoSignChange as exc:
        raise BracketFailure(
            f"quartic stayed negative up to a = {_QUARTIC_A_MAX} for m = {m}"
        ) from exc
    root, _ = bracketed_root(
        lambda a: turning_quartic(a, m),
        lo,
        hi,
        fa=f_lo,
        fb=f_hi,
        xtol=1e-15,
        ftol=1e-13,
    )
    return root


def a0_analytic_bound(m: float) -> float:
    """Closed-form lower bound on the monotonicity threshold A0.

    Evaluated at the quartic root a: 1/2 + 4m + 12m/(a**2-1) + 8m/(a**2-1)**2.
    """
    m = validate_mass_ratio(m)
    a = solve_turning_quartic(m)
    u = a * a - 1.0
    return 0.5 + 4.0 * m + 12.0 * m / u + 8.0 * m / (u * u)


def _inner_velocity(Q1: float, Q2: float, P1: float, P2: float, m: float) -> float:
    """Cartesian velocity of the inner body from regularized coordinates."""
    p1 = P1 / (2.0 * Q1)
    p2 = P2 / (2.0 * Q2)
    return (2.0 * p2 - p1) / (2.0 * m)


def detect_turning_point(
    R: float, m: float, cfg: Optional[IntegratorConfig] = None
) -> Optional[TurningPoint]:
    """First outward-to-inward velocity switch of the inner body, if any.

    Integrates from the binary-collision start to the first SBC, scans the
    reconstructed velocity on a dense grid strictly inside (0, s1), and
    refines the first positive-to-negative crossing by bisection on the dense
    output. Returns None when the velocity never switches sign.
    """
    cfg = cfg or IntegratorConfig()
    m = validate_mass_ratio(m)
    traj = integrate(
        bc_initial_state(R, m), m, cfg, StopCondition.first(CollisionKind.SBC)
    )
    s1 = traj.end.s

    def velocity_at(s: float) -> Optional[float]:
        st = traj.interpolate(s)
        if abs(st.Q1) <= 1e-8 or abs(st.Q2) <= 1e-8:
            return None
        return _inner_velocity(st.Q1, st.Q2, st.P1, st.P2, m)

    ds = s1 / (_SCAN_POINTS + 1)
    prev_s = None
    prev_v = None
    for i in range(1, _SCAN_POINTS + 1):
        s = i * ds
        v = velocity_at(s)
        if v is None:
            continue
        if prev_v is not None and prev_v > 0.0 and v <= 0.0:
            s_lo, s_hi = prev_s, s
            for _ in range(80):
                if s_hi - s_lo <= 1e-13:
                    break
                mid = 0.5 * (s_lo + s_hi)
                vm = velocity_at(mid)
                if vm is None or vm > 0.0:
                    s_lo = mid
                else:
                    s_hi = mid
            s_star = 0.5 * (s_lo + s_hi)
            st = traj.interpolate(s_star)
            return TurningPoint(t_star=st.t, x2_at=0.5 * st.Q2 * st.Q2, s_star=s_star)
        prev_s, prev_v = s, v
    return None


def numeric_a0(m: float, cfg: Optional[IntegratorConfig] = None) -> float:
    """Numeric monotonicity threshold: bisection of the turning-point
    predicate over A, floored at the analytic bound, to width 1e-4."""
    cfg = cfg or IntegratorConfig()
    m = validate_mass_ratio(m)
    a_lo = a0_analytic_bound(m)
    if detect_turning_point(math.sqrt(a_lo), m, cfg) is not None:
        # The bound is proven safe; a turning point here means integration
        # noise, not a real threshold below the floor.
        raise BracketFailure(
            f"turning point detected at the analytic bound A = {a_lo} for m = {m}"
        )
    a_hi = a_lo
    while True:
        a_hi *= 1.25
        if a_hi > _A_HI_LIMIT:
            raise BracketFailure(
                f"no turning point up to A = {_A_HI_LIMIT} for m = {m}"
            )
        if detect_turning_point(math.sqrt(a_hi), m, cfg) is not None:
            break
    lo, hi = a_lo, a_hi
    while hi - lo > 1e-4:
        mid = 0.5 * (lo + hi)
        if detect_turning_point(math.sqrt(mid), m, cfg) is None:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def a0_estimate(
    m: float, cfg: Optional[IntegratorConfig] = None, numeric: bool = False
) -> A0Estimate:
    """Bundle the quartic root, analytic bound, and optional numeric threshold."""
    a = solve_turning_quartic(m)
    u = a * a - 1.0
    bound = 0.5 + 4.0 * m + 12.0 * m / u + 8.0 * m / (u * u)
    threshold = numeric_a0(m, cfg) if numeric else None
    return A0Estimate(a_root=a, analytic_bound=bound, numeric_threshold=threshold)

"""Shooting solver for the alternating-collision periodic orbit.

From a binary-collision start with outer parameter R, the flow reaches a
first simultaneous binary collision at fictitious time s1(R). The residual
f(R) = P2(s1(R), R) changes sign over a provable bracket: it is positive at
R = sqrt(m/3) and negative once A = R**2 passes the monotonicity threshold.
The root R* gives P2(s1) = 0, and reflecting the quarter arc through its
collision symmetries closes the orbit over one period 4 s1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .bounds import a0_analytic_bound, numeric_a0
from .dynamics import bc_initial_state
from .errors import BracketFailure, CheckpointMismatch, NoSignChange
from .integrator import (
    EventHit,
    IntegratorConfig,
    StopCondition,
    Trajectory,
    first_sbc,
    integrate,
)
from .model import RegularizedState, validate_mass_ratio
from .rootfind import bracketed_root

_BRACKET_EXPAND = 1.25
_WIDTH_TOL = 1e-10
_MAX_ITER = 200
_CHECKPOINT_TOL = 1e-6


@dataclass(frozen=True)
class ShootingResult:
    """Root of the shooting residual with the evaluation history."""

    m: float
    R_star: float
    s1: float
    t1: float
    sbc_state: RegularizedState
    residual: float
    bracket_trace: Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class PeriodicOrbit:
    """Full-period trajectory with its quarter-period checkpoint states."""

    result: ShootingResult
    samples: Trajectory
    checkpoints: Tuple[RegularizedState, ...]
    checkpoint_deviations: Tuple[float, ...]
    period_s: float
    period_t: float


def residual(R: float, m: float, cfg: Optional[IntegratorConfig] = None) -> float:
    """P2 at the localized first SBC, as a function of the start parameter R."""
    cfg = cfg or IntegratorConfig()
    return first_sbc(R, m, cfg).state.P2


def default_bracket(
    m: float,
    cfg: Optional[IntegratorConfig] = None,
    _trace: Optional[List[Tuple[float, float]]] = None,
) -> Tuple[float, float]:
    """Sign-changing bracket for the residual.

    R_lo = sqrt(m/3) (residual provably positive); R_hi starts at the square
    root of the analytic monotonicity bound and is expanded geometrically
    until the residual turns negative, capped at four times the numeric
    threshold.
    """
    cfg = cfg or IntegratorConfig()
    m = validate_mass_ratio(m)
    r_lo = math.sqrt(m / 3.0)
    f_lo = residual(r_lo, m, cfg)
    if _trace is not None:
        _trace.append((r_lo, f_lo))
    if f_lo <= 0.0:
        raise BracketFailure(
            f"residual at R = sqrt(m/3) = {r_lo} is {f_lo}, expected positive"
        )
    r_hi = math.sqrt(a0_analytic_bound(m))
    f_hi = residual(r_hi, m, cfg)
    if _trace is not None:
        _trace.append((r_hi, f_hi))
    if f_hi >= 0.0:
        # Negativity is only proven at the true threshold, which the analytic
        # bound undershoots; expand toward it.
        cap_sq = numeric_a0(m, cfg) * 4.0
        while f_hi >= 0.0:
            r_hi *= _BRACKET_EXPAND
            if r_hi * r_hi > cap_sq:
                raise BracketFailure(
                    f"no negative residual found up to R**2 = {cap_sq} for m = {m}"
                )
            f_hi = residual(r_hi, m, cfg)
            if _trace is not None:
                _trace.append((r_hi, f_hi))
    return r_lo, r_hi


def find_periodic_R(
    m: float,
    cfg: Optional[IntegratorConfig] = None,
    r_tol: float = 1e-9,
    bracket: Optional[Tuple[float, float]] = None,
) -> ShootingResult:
    """Solve the shooting problem for the periodic orbit's R*.

    Safeguarded bisection/secant iteration on the residual until
    |residual| <= r_tol or the bracket width falls to 1e-10. A user bracket
    must contain a sign change (positive residual at the low end).
    """
    cfg = cfg or IntegratorConfig()
    m = validate_mass_ratio(m)
    trace: List[Tuple[float, float]] = []

    def f(R: float) -> float:
        return residual(R, m, cfg)

    if bracket is None:
        r_lo, r_hi = default_bracket(m, cfg, _trace=trace)
        f_lo = trace[0][1]
        f_hi = trace[-1][1]
    else:
        r_lo, r_hi = bracket
        if not (0.0 < r_lo < r_hi):
            raise BracketFailure(f"invalid bracket ({r_lo}, {r_hi})")
        f_lo = f(r_lo)
        trace.append((r_lo, f_lo))
        f_hi = f(r_hi)
        trace.append((r_hi, f_hi))
    try:
        R_star, f_star = bracketed_root(
            f,
            r_lo,
            r_hi,
            fa=f_lo,
            fb=f_hi,
            xtol=_WIDTH_TOL,
            ftol=r_tol,
            max_iter=_MAX_ITER,
            trace=trace,
        )
    except NoSignChange as exc:
        raise BracketFailure(str(exc)) from exc

    hit = first_sbc(R_star, m, cfg)
    return ShootingResult(
        m=m,
        R_star=R_star,
        s1=hit.s,
        t1=hit.state.t,
        sbc_state=hit.state,
        residual=f_star,
        bracket_trace=tuple(trace),
    )


def build_period(res: ShootingResult, cfg: Optional[IntegratorConfig] = None) -> PeriodicOrbit:
    """Integrate the found orbit over [0, 4 s1] and verify its checkpoints.

    The quarter-period states must match the collision symmetry pattern:
    s1 -> (0, R1, P1(s1), 0), 2 s1 -> (-R, 0, 0, -2 m^{3/2}),
    3 s1 -> (0, -R1, -P1(s1), 0), 4 s1 -> the initial state again.
    Deviations beyond 1e-6 in the max norm raise CheckpointMismatch.
    """
    cfg = cfg or IntegratorConfig()
    m = res.m
    s1 = res.s1
    R = res.R_star
    p2_0 = 2.0 * m ** 1.5
    sbc = res.sbc_state
    expected = (
        (0.0, sbc.Q2, sbc.P1, 0.0),
        (-R, 0.0, 0.0, -p2_0),
        (0.0, -sbc.Q2, -sbc.P1, 0.0),
        (R, 0.0, 0.0, p2_0),
    )

    state = bc_initial_state(R, m)
    legs: List[Trajectory] = []
    checkpoints: List[RegularizedState] = []
    deviations: List[float] = []
    for k in range(4):
        leg = integrate(state, m, cfg, StopCondition.at_s((k + 1) * s1))
        legs.append(leg)
        state = leg.end
        checkpoints.append(state)
        exp = expected[k]
        got = (state.Q1, state.Q2, state.P1, state.P2)
        dev = max(abs(g - e) for g, e in zip(got, exp))
        deviations.append(dev)
        if dev > _CHECKPOINT_TOL:
            raise CheckpointMismatch(
                f"checkpoint at s = {(k + 1)}*s1 deviates by {dev:.3e} "
                f"(expected {exp}, got {got})"
            )

    samples: List[RegularizedState] = []
    events: List[EventHit] = []
    for leg in legs:
        for st in leg.samples:
            if not samples or st.s > samples[-1].s:
                samples.append(st)
        events.extend(leg.events)
    full = Trajectory(samples=tuple(samples), events=tuple(events), m=m, energy=legs[0].energy)
    return PeriodicOrbit(
        result=res,
        samples=full,
        checkpoints=tuple(checkpoints),
        checkpoint_deviations=tuple(deviations),
        period_s=4.0 * s1,
        period_t=checkpoints[-1].t,
    )

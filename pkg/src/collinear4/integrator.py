"""Adaptive integration of the regularized flow with collision-event location.

The flow is smooth and non-stiff in the Levi-Civita variables, so an explicit
embedded Dormand-Prince 5(4) pair with PI step-size control is used. Dense
output is cubic Hermite interpolation over accepted steps; events (sign
changes of Q1 for SBC, Q2 for BC) are bracketed on accepted steps and then
localized by bisection on a small re-integrating evaluator, which keeps the
event state at full integration accuracy rather than interpolation accuracy.

Everything here is deterministic: identical inputs produce bit-identical
trajectories on a given platform.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

from .dynamics import ENERGY, Derivative5, _field, bc_initial_state
from .errors import HorizonExceeded, NoSignChange, StepUnderflow, TotalCollapse
from .model import COLLISION_TOL, CollisionKind, RegularizedState, validate_mass_ratio

# Dormand-Prince 5(4) tableau (propagated solution is 5th order, FSAL).
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
# Error coefficients: 5th-order weights minus the embedded 4th-order weights.
_E7 = (
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_MIN_STEP = 1e-14
_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0
_BETA = 0.04
_EXPO1 = 0.2 - _BETA * 0.75


@dataclass(frozen=True)
class IntegratorConfig:
    """Step-control and event-localization parameters of the regularized flow."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    initial_step: float = 1e-3
    max_step: float = 0.25
    s_horizon: float = 50.0
    event_tol_s: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("rel_tol", "abs_tol", "initial_step", "max_step", "event_tol_s"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.rel_tol < 1e-14 or self.abs_tol < 1e-14:
            raise ValueError("rel_tol and abs_tol must be at least 1e-14")
        if self.s_horizon < 0.0 or not math.isfinite(self.s_horizon):
            raise ValueError(f"s_horizon must be finite and nonnegative, got {self.s_horizon!r}")
        if self.event_tol_s >= self.initial_step:
            raise ValueError("event_tol_s must be smaller than initial_step")


@dataclass(frozen=True)
class EventHit:
    """A localized collision crossing of the regularized flow."""

    kind: CollisionKind
    s: float
    state: RegularizedState
    crossing_derivative: float


@dataclass(frozen=True)
class StopCondition:
    """Where an integration ends: a fictitious-time target or a counted event."""

    mode: str  # "s_end" or "event"
    s_end: Optional[float] = None
    event_kind: Optional[CollisionKind] = None
    event_count: int = 1

    @classmethod
    def horizon(cls) -> "StopCondition":
        """Run to the configured s_horizon."""
        return cls(mode="s_end")

    @classmethod
    def at_s(cls, s_end: float) -> "StopCondition":
        """Run to exactly the given fictitious time."""
        return cls(mode="s_end", s_end=float(s_end))

    @classmethod
    def first(cls, kind: CollisionKind) -> "StopCondition":
        """Stop at the first event of the given kind."""
        return cls(mode="event", event_kind=kind, event_count=1)

    @classmethod
    def nth(cls, kind: CollisionKind, count: int) -> "StopCondition":
        """Stop at the count-th event of the given kind."""
        if count < 1:
            raise ValueError(f"event count must be >= 1, got {count}")
        return cls(mode="event", event_kind=kind, event_count=count)


@dataclass(frozen=True)
class Trajectory:
    """Accepted integration samples (strictly increasing in s) plus events."""

    samples: Tuple[RegularizedState, ...]
    events: Tuple[EventHit, ...]
    m: float
    energy: float = ENERGY
    _s_index: Tuple[float, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        ss = tuple(st.s for st in self.samples)
        if any(b <= a for a, b in zip(ss, ss[1:])):
            raise ValueError("trajectory samples must be strictly increasing in s")
        object.__setattr__(self, "_s_index", ss)

    @property
    def start(self) -> RegularizedState:
        return self.samples[0]

    @property
    def end(self) -> RegularizedState:
        return self.samples[-1]

    def interpolate(self, s: float) -> RegularizedState:
        """Cubic Hermite dense output between the two bracketing samples."""
        ss = self._s_index
        if not ss:
            raise ValueError("empty trajectory")
        if s <= ss[0]:
            return self.samples[0]
        if s >= ss[-1]:
            return self.samples[-1]
        hi = bisect.bisect_right(ss, s)
        lo = hi - 1
        y0 = self.samples[lo]
        y1 = self.samples[hi]
        h = y1.s - y0.s
        theta = (s - y0.s) / h
        f0 = _field(y0.Q1, y0.Q2, y0.P1, y0.P2, self.m, self.energy)
        f1 = _field(y1.Q1, y1.Q2, y1.P1, y1.P2, self.m, self.energy)
        t2 = theta * theta
        t3 = t2 * theta
        h00 = 2.0 * t3 - 3.0 * t2 + 1.0
        h10 = t3 - 2.0 * t2 + theta
        h01 = -2.0 * t3 + 3.0 * t2
        h11 = t3 - t2
        a = y0.astuple()
        b = y1.astuple()
        vals = [
            h00 * a[i] + h10 * h * f0[i] + h01 * b[i] + h11 * h * f1[i]
            for i in range(5)
        ]
        return RegularizedState(vals[0], vals[1], vals[2], vals[3], t=vals[4], s=s)

    def state_at_time(self, t: float) -> RegularizedState:
        """State at a given physical time (t is nondecreasing along samples)."""
        ts = [st.t for st in self.samples]
        if t <= ts[0]:
            return self.samples[0]
        if t >= ts[-1]:
            return self.samples[-1]
        hi = bisect.bisect_right(ts, t)
        lo = hi - 1
        s_lo, s_hi = self.samples[lo].s, self.samples[hi].s
        # invert the monotone map s -> t by bisection on the dense output
        for _ in range(200):
            if s_hi - s_lo <= 1e-14 * max(1.0, abs(s_hi)):
                break
            mid = 0.5 * (s_lo + s_hi)
            if self.interpolate(mid).t < t:
                s_lo = mid
            else:
                s_hi = mid
        return self.interpolate(0.5 * (s_lo + s_hi))


def _rk_step(
    y: Tuple[float, ...],
    f0: Derivative5,
    h: float,
    m: float,
    E: float,
    rel_tol: float,
    abs_tol: float,
) -> Tuple[Tuple[float, ...], Derivative5, float]:
    """One Dormand-Prince attempt from y with step h.

    Returns (y_new, f_new, err_norm): err_norm is the tolerance-scaled RMS
    local error estimate (accept when <= 1); f_new is the FSAL derivative at
    y_new, valid only on acceptance.
    """
    k = [f0]
    for stage in range(1, 7):
        coeffs = _A[stage]
        ys = list(y)
        for j, a in enumerate(coeffs):
            if a != 0.0:
                kj = k[j]
                for i in range(5):
                    ys[i] += h * a * kj[i]
        k.append(_field(ys[0], ys[1], ys[2], ys[3], m, E))
    # 5th-order solution: the weights are the last _A row (FSAL property).
    b = _A[6]
    y_new = list(y)
    for j, w in enumerate(b):
        if w != 0.0:
            kj = k[j]
            for i in range(5):
                y_new[i] += h * w * kj[i]
    f_new = _field(y_new[0], y_new[1], y_new[2], y_new[3], m, E)
    k.append(f_new)
    err_sq = 0.0
    for i in range(5):
        e = 0.0
        for j in range(7):
            c = _E7[j]
            if c != 0.0:
                e += c * k[j][i]
        e *= h
        scale = abs_tol + rel_tol * max(abs(y[i]), abs(y_new[i]))
        err_sq += (e / scale) ** 2
    return tuple(y_new), f_new, math.sqrt(err_sq / 5.0)


def _propose_factor(err: float, facold: float, rejected: bool) -> float:
    """PI step-size factor (Hairer-style stabilized controller)."""
    if err == 0.0:
        fac = _FAC_MAX
    else:
        fac = _SAFETY * err ** (-_EXPO1) * facold ** _BETA
        fac = min(_FAC_MAX, max(_FAC_MIN, fac))
    if rejected:
        fac = min(fac, 1.0)
    return fac


def _advance(
    y: Tuple[float, ...],
    s_from: float,
    s_to: float,
    h0: float,
    m: float,
    cfg: IntegratorConfig,
    E: float,
) -> Tuple[float, ...]:
    """Integrate from (y, s_from) to exactly s_to with no event handling.

    Used as the high-accuracy evaluator during event localization; restarting
    from the accepted step start keeps evaluations at nearby s mutually
    consistent.
    """
    if s_to <= s_from:
        return y
    s = s_from
    f0 = _field(y[0], y[1], y[2], y[3], m, E)
    h = min(h0, cfg.max_step, s_to - s_from)
    facold = 1e-4
    rejected = False
    while True:
        remaining = s_to - s
        if remaining <= 1e-15 * max(1.0, abs(s_to)):
            return y
        final = remaining <= h
        h_try = remaining if final else h
        if h_try < _MIN_STEP:
            raise StepUnderflow(f"step {h_try} below {_MIN_STEP} at s = {s}")
        y_new, f_new, err = _rk_step(y, f0, h_try, m, E, cfg.rel_tol, cfg.abs_tol)
        if err > 1.0:
            h = h_try * max(_FAC_MIN, _SAFETY * err ** (-_EXPO1))
            rejected = True
            continue
        y, f0 = y_new, f_new
        s = s_to if final else s + h_try
        if not final:
            h = h_try * _propose_factor(err, facold, rejected)
        facold = max(err, 1e-4)
        rejected = False


def integrate(
    start: RegularizedState,
    m: float,
    cfg: IntegratorConfig,
    stop: StopCondition,
    E: float = ENERGY,
) -> Trajectory:
    """Integrate the regularized flow from `start` until `stop` is met.

    The trajectory records every accepted step plus every localized event
    state. With an event stop, the final sample is the event state itself;
    HorizonExceeded is raised if the requested event does not occur before
    cfg.s_horizon. StepUnderflow and TotalCollapse propagate from the stepper.
    """
    m = validate_mass_ratio(m)
    y = start.astuple()
    if not all(math.isfinite(v) for v in y):
        raise ValueError(f"start state must be finite, got {start!r}")
    s = start.s
    if stop.mode == "s_end":
        s_end = cfg.s_horizon if stop.s_end is None else stop.s_end
    else:
        s_end = cfg.s_horizon
    samples: List[RegularizedState] = [start]
    events: List[EventHit] = []
    counts = {CollisionKind.SBC: 0, CollisionKind.BC: 0}

    if s_end - s <= 0.0:
        return Trajectory(samples=tuple(samples), events=(), m=m, energy=E)

    f0 = _field(y[0], y[1], y[2], y[3], m, E)
    h = min(cfg.initial_step, cfg.max_step)
    facold = 1e-4
    rejected = False
    while True:
        remaining = s_end - s
        if remaining <= 1e-15 * max(1.0, abs(s_end)):
            break
        final = remaining <= min(h, cfg.max_step)
        h_try = remaining if final else min(h, cfg.max_step)
        if h_try < _MIN_STEP:
            raise StepUnderflow(f"step {h_try} below {_MIN_STEP} at s = {s}")
        y_new, f_new, err = _rk_step(y, f0, h_try, m, E, cfg.rel_tol, cfg.abs_tol)
        if err > 1.0:
            h = h_try * max(_FAC_MIN, _SAFETY * err ** (-_EXPO1))
            rejected = True
            continue
        s_new = s_end if final else s + h_try

        # Collision events: strict sign change of the raw coordinate over the
        # accepted step (a zero at the step start is a collision just left).
        crossings = []
        for kind, idx in ((CollisionKind.SBC, 0), (CollisionKind.BC, 1)):
            g0, g1 = y[idx], y_new[idx]
            if g0 != 0.0 and (g1 == 0.0 or (g0 > 0.0) != (g1 > 0.0)):
                crossings.append((kind, idx))
        if crossings:
            evaluator = _make_advancing_evaluator(y, s, h_try, m, cfg, E)
            hits = [
                locate_event((s, s_new), evaluator, kind, cfg, m=m, E=E)
                for kind, _ in crossings
            ]
            hits.sort(key=lambda hit: hit.s)
            for hit in hits:
                counts[hit.kind] += 1
                if hit.s > samples[-1].s:
                    samples.append(hit.state)
                events.append(hit)
                if (
                    stop.mode == "event"
                    and hit.kind == stop.event_kind
                    and counts[hit.kind] >= stop.event_count
                ):
                    return Trajectory(
                        samples=tuple(samples), events=tuple(events), m=m, energy=E
                    )

        state_new = RegularizedState(
            y_new[0], y_new[1], y_new[2], y_new[3], t=y_new[4], s=s_new
        )
        if samples and s_new > samples[-1].s:
            samples.append(state_new)
        if abs(y_new[0]) <= COLLISION_TOL and abs(y_new[1]) <= COLLISION_TOL:
            raise TotalCollapse(f"Q1 = Q2 = 0 reached at s = {s_new}")
        if not final:
            h = h_try * _propose_factor(err, facold, rejected)
        facold = max(err, 1e-4)
        rejected = False
        y, f0, s = y_new, f_new, s_new

    if stop.mode == "event":
        raise HorizonExceeded(
            f"no {stop.event_kind.value} event number {stop.event_count} before "
            f"s_horizon = {cfg.s_horizon} (saw {counts[stop.event_kind]})"
        )
    return Trajectory(samples=tuple(samples), events=tuple(events), m=m, energy=E)


def _make_advancing_evaluator(
    y: Tuple[float, ...],
    s0: float,
    h_hint: float,
    m: float,
    cfg: IntegratorConfig,
    E: float,
) -> Callable[[float], RegularizedState]:
    """Continuous state evaluator re-integrating from the accepted step start."""

    def evaluate(s: float) -> RegularizedState:
        yy = _advance(y, s0, s, h_hint, m, cfg, E)
        return RegularizedState(yy[0], yy[1], yy[2], yy[3], t=yy[4], s=s)

    return evaluate


def locate_event(
    bracket: Tuple[float, float],
    dense_eval: Callable[[float], RegularizedState],
    kind: CollisionKind,
    cfg: IntegratorConfig,
    m: float,
    E: float = ENERGY,
) -> EventHit:
    """Bisect the monitored coordinate to within cfg.event_tol_s in s.

    The monitored coordinate is Q1 for an SBC, Q2 for a BC; it must change
    sign over the bracket (NoSignChange otherwise). The returned state comes
    from dense_eval at the final midpoint, so its residual coordinate value is
    bounded by the local derivative times event_tol_s.
    """
    s_lo, s_hi = bracket
    idx = 0 if kind == CollisionKind.SBC else 1
    st_lo = dense_eval(s_lo)
    g_lo = st_lo.astuple()[idx]
    if g_lo == 0.0:
        deriv = _field(st_lo.Q1, st_lo.Q2, st_lo.P1, st_lo.P2, m, E)[idx]
        return EventHit(kind=kind, s=s_lo, state=st_lo, crossing_derivative=deriv)
    g_hi = dense_eval(s_hi).astuple()[idx]
    if g_hi != 0.0 and (g_lo > 0.0) == (g_hi > 0.0):
        raise NoSignChange(
            f"{kind.value} coordinate does not change sign over [{s_lo}, {s_hi}]"
        )
    positive_lo = g_lo > 0.0
    while s_hi - s_lo > cfg.event_tol_s:
        mid = 0.5 * (s_lo + s_hi)
        if mid <= s_lo or mid >= s_hi:
            break  # bracket at floating-point resolution
        g_mid = dense_eval(mid).astuple()[idx]
        if g_mid == 0.0:
            s_lo = s_hi = mid
            break
        if (g_mid > 0.0) == positive_lo:
            s_lo = mid
        else:
            s_hi = mid
    s_event = 0.5 * (s_lo + s_hi)
    state = dense_eval(s_event)
    deriv = _field(state.Q1, state.Q2, state.P1, state.P2, m, E)[idx]
    return EventHit(kind=kind, s=s_event, state=state, crossing_derivative=deriv)


def first_sbc(R: float, m: float, cfg: IntegratorConfig) -> EventHit:
    """Integrate from the standard BC start to the first SBC crossing."""
    traj = integrate(
        bc_initial_state(R, m), m, cfg, StopCondition.first(CollisionKind.SBC)
    )
    return traj.events[-1]

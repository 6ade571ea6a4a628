"""Invariant checks and independent cross-validation for trajectories.

Every check is a pure function of an immutable trajectory: conservation of
the regularized Hamiltonian, energy consistency under the coordinate maps,
an independent re-integration of the raw Newtonian equations over a
collision-free arc, monotonicity of the inner position, and the closed-form
derivative of P1*Q1 + P2*Q2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .dynamics import gamma, hamiltonian_cartesian, newtonian_accel
from .errors import NoSafeArc
from .integrator import IntegratorConfig, Trajectory
from .model import CartesianState, regularized_to_cartesian

GAMMA_THRESHOLD = 1e-8
ENERGY_THRESHOLD = 1e-7
SUM_THRESHOLD = 1e-5
CROSSVAL_THRESHOLD = 1e-6

_ENERGY_MIN_COORD = 0.1
_CROSSVAL_MIN_COORD = 0.2


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Outcome bundle; failed checks always carry their measured value."""

    checks: Tuple[CheckResult, ...]
    worst_gamma: float
    worst_energy: float
    crossval_max_dev: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_gamma": self.worst_gamma,
            "worst_energy": self.worst_energy,
            "crossval_max_dev": self.crossval_max_dev,
            "checks": [c.to_dict() for c in self.checks],
        }


def check_gamma(
    traj: Trajectory, m: float, threshold: float = GAMMA_THRESHOLD
) -> CheckResult:
    """Max |Gamma| over all samples; zero up to roundoff on exact flows."""
    worst = max(abs(gamma(st, m, E=traj.energy)) for st in traj.samples)
    return CheckResult("gamma_conservation", worst <= threshold, worst, threshold)


def check_energy(
    traj: Trajectory,
    m: float,
    threshold: float = ENERGY_THRESHOLD,
    min_coord: float = _ENERGY_MIN_COORD,
) -> CheckResult:
    """Max |H - E| in Cartesian variables, away from collisions.

    Samples with min(|Q1|, |Q2|) <= min_coord are skipped: the Cartesian
    Hamiltonian is singular at collisions and loses precision nearby.
    """
    worst = 0.0
    for st in traj.samples:
        if min(abs(st.Q1), abs(st.Q2)) <= min_coord:
            continue
        cart = regularized_to_cartesian(st, m)
        worst = max(worst, abs(hamiltonian_cartesian(cart, m) - traj.energy))
    return CheckResult("energy_consistency", worst <= threshold, worst, threshold)


def _longest_safe_run(traj: Trajectory, min_coord: float) -> List[int]:
    best: List[int] = []
    run: List[int] = []
    for i, st in enumerate(traj.samples):
        if min(abs(st.Q1), abs(st.Q2)) >= min_coord:
            run.append(i)
        else:
            if len(run) > len(best):
                best = run
            run = []
    if len(run) > len(best):
        best = run
    return best


def cross_validate(
    traj: Trajectory,
    m: float,
    cfg: Optional[IntegratorConfig] = None,
    min_coord: float = _CROSSVAL_MIN_COORD,
) -> float:
    """Re-integrate the raw Newtonian equations over a collision-free arc.

    Picks the longest contiguous sample run with min(|Q1|, |Q2|) >= min_coord,
    maps its first state to Cartesian variables, integrates x1'' and x2''
    directly over the same physical-time span with an unrelated high-order
    scheme, and returns the max deviation in (x1, x2) at the sample times.
    """
    from scipy.integrate import solve_ivp

    del cfg  # reserved; the oracle side fixes its own tolerances
    run = _longest_safe_run(traj, min_coord)
    if not run:
        raise NoSafeArc(
            f"no samples with min(|Q1|, |Q2|) >= {min_coord}; "
            "cannot cross-validate near collisions"
        )
    if len(run) == 1:
        return 0.0

    carts = [regularized_to_cartesian(traj.samples[i], m) for i in run]
    times = np.array([c.t for c in carts])
    first = carts[0]
    y0 = (first.x1, first.x2, first.v1, first.v2)

    def rhs(t: float, y: np.ndarray):
        st = CartesianState(x1=y[0], x2=y[1], v1=y[2], v2=y[3], t=t)
        a1, a2 = newtonian_accel(st, m)
        return (y[2], y[3], a1, a2)

    sol = solve_ivp(
        rhs,
        (times[0], times[-1]),
        y0,
        method="DOP853",
        t_eval=times,
        rtol=1e-12,
        atol=1e-14,
    )
    if not sol.success:
        raise NoSafeArc(f"reference integration failed on the safe arc: {sol.message}")
    dev = 0.0
    for j, c in enumerate(carts):
        dev = max(dev, abs(sol.y[0][j] - c.x1), abs(sol.y[1][j] - c.x2))
    return float(dev)


def check_crossval(
    traj: Trajectory,
    m: float,
    threshold: float = CROSSVAL_THRESHOLD,
    cfg: Optional[IntegratorConfig] = None,
) -> CheckResult:
    """cross_validate wrapped as a named pass/fail check."""
    try:
        dev = cross_validate(traj, m, cfg)
    except NoSafeArc:
        dev = math.inf
    return CheckResult("newtonian_crossval", dev <= threshold, dev, threshold)


def _spaced_indices(s: List[float], min_gap: float) -> List[int]:
    """Sample indices thinned to a minimum s-spacing.

    Event localization can insert samples within ~1e-12 of a step endpoint;
    differencing across such a gap amplifies roundoff, so checks that
    difference neighbors drop the near-duplicates first.
    """
    keep: List[int] = []
    for i, si in enumerate(s):
        if not keep or si - s[keep[-1]] >= min_gap:
            keep.append(i)
    return keep


def check_monotone_x2(traj: Trajectory) -> CheckResult:
    """x2 = Q2**2 / 2 strictly increasing over the samples.

    Meaningful on a start-to-first-SBC segment; measured value is the
    smallest forward difference (vacuously passes on a single sample).
    """
    keep = _spaced_indices([st.s for st in traj.samples], 1e-9)
    x2 = [0.5 * traj.samples[i].Q2 * traj.samples[i].Q2 for i in keep]
    if len(x2) < 2:
        return CheckResult("monotone_x2", True, math.inf, 0.0)
    worst = min(b - a for a, b in zip(x2, x2[1:]))
    return CheckResult("monotone_x2", worst > 0.0, worst, 0.0)


def sum_identity_rhs(Q1: float, Q2: float, m: float, E: float) -> float:
    """Closed-form derivative of P1*Q1 + P2*Q2 along the regularized flow."""
    a = Q1 * Q1
    b = Q2 * Q2
    d1 = a + b
    d2 = 2.0 * a + b
    if d1 == 0.0:
        return 0.0
    return 4.0 * m * b + 2.0 * m * m * a + 2.0 * a * b * (
        2.0 * m / d1 + 1.0 / d2 + 2.0 * E
    )


def check_sum_identity(
    traj: Trajectory, m: float, threshold: float = SUM_THRESHOLD
) -> CheckResult:
    """Central-difference derivative of P1*Q1 + P2*Q2 versus its closed form.

    Endpoints use one-sided differences and are excluded; the threshold
    should reflect the sample spacing (second-order differences).
    """
    keep = _spaced_indices([st.s for st in traj.samples], 1e-6)
    if len(keep) < 3:
        return CheckResult("sum_identity", True, 0.0, threshold)
    states = [traj.samples[i] for i in keep]
    s = np.array([st.s for st in states])
    u = np.array([st.P1 * st.Q1 + st.P2 * st.Q2 for st in states])
    du = np.gradient(u, s)
    rhs = np.array([sum_identity_rhs(st.Q1, st.Q2, m, traj.energy) for st in states])
    worst = float(np.max(np.abs(du[1:-1] - rhs[1:-1])))
    return CheckResult("sum_identity", worst <= threshold, worst, threshold)


def build_report(
    traj: Trajectory,
    m: float,
    cfg: Optional[IntegratorConfig] = None,
    gamma_threshold: float = GAMMA_THRESHOLD,
    energy_threshold: float = ENERGY_THRESHOLD,
    sum_threshold: float = SUM_THRESHOLD,
    crossval_threshold: float = CROSSVAL_THRESHOLD,
    include_monotone: bool = False,
) -> VerificationReport:
    """Run the full check suite over one trajectory.

    The monotonicity check only applies to start-to-first-SBC segments and
    is opt-in; a full-period orbit retraces x2 and would fail it by design.
    """
    checks: List[CheckResult] = [
        check_gamma(traj, m, gamma_threshold),
        check_energy(traj, m, energy_threshold),
        check_sum_identity(traj, m, sum_threshold),
        check_crossval(traj, m, crossval_threshold, cfg),
    ]
    if include_monotone:
        checks.append(check_monotone_x2(traj))
    by_name = {c.name: c for c in checks}
    return VerificationReport(
        checks=tuple(checks),
        worst_gamma=by_name["gamma_conservation"].measured,
        worst_energy=by_name["energy_consistency"].measured,
        crossval_max_dev=by_name["newtonian_crossval"].measured,
    )

"""Verification checks: invariants, identities, and the Newtonian oracle."""

from __future__ import annotations

import dataclasses
import json
import math

import pytest

from collinear4 import (
    CollisionKind,
    RegularizedState,
    StopCondition,
    Trajectory,
    bc_initial_state,
    build_report,
    check_crossval,
    check_energy,
    check_gamma,
    check_monotone_x2,
    check_sum_identity,
    cross_validate,
    integrate,
    sum_identity_rhs,
)
from collinear4.errors import NoSafeArc


@pytest.fixture(scope="module")
def quarter_arc(orbit_result, default_cfg):
    start = bc_initial_state(orbit_result.R_star, 1.0)
    return integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))


@pytest.fixture(scope="module")
def dense_low_arc(dense_cfg):
    # start parameter below the monotonicity threshold, finely sampled
    start = bc_initial_state(math.sqrt(1.0 / 3.0), 1.0)
    return integrate(start, 1.0, dense_cfg, StopCondition.first(CollisionKind.SBC))


def _with_bumped_sample(traj, index, **deltas):
    samples = list(traj.samples)
    st = samples[index]
    samples[index] = dataclasses.replace(
        st, **{k: getattr(st, k) + dv for k, dv in deltas.items()}
    )
    return Trajectory(samples=tuple(samples), events=(), m=traj.m, energy=traj.energy)


def test_gamma_conserved_on_orbit(periodic_orbit):
    res = check_gamma(periodic_orbit.samples, 1.0)
    assert res.passed
    assert res.measured <= 1e-8


def test_gamma_catches_corruption(quarter_arc):
    bad = _with_bumped_sample(quarter_arc, len(quarter_arc.samples) // 2, P2=0.1)
    res = check_gamma(bad, 1.0)
    assert not res.passed
    assert res.measured > 1e-3


def test_energy_consistent_on_orbit(periodic_orbit):
    res = check_energy(periodic_orbit.samples, 1.0)
    assert res.passed
    assert res.measured <= 1e-7


def test_energy_skips_collision_neighborhood():
    # every sample is within the exclusion band, so nothing is measured
    st = RegularizedState(Q1=0.05, Q2=2.0, P1=1.0, P2=1.0)
    traj = Trajectory(samples=(st,), events=(), m=1.0)
    res = check_energy(traj, 1.0)
    assert res.passed
    assert res.measured == 0.0


def test_energy_negative_control():
    # positions (x1, x2) = (2, 1) at rest have H = -41/12, far from E = -1
    st = RegularizedState(Q1=1.0, Q2=math.sqrt(2.0), P1=0.0, P2=0.0)
    traj = Trajectory(samples=(st,), events=(), m=1.0)
    res = check_energy(traj, 1.0)
    assert not res.passed
    assert res.measured == pytest.approx(41.0 / 12.0 - 1.0, abs=1e-12)


def test_crossval_on_orbit(periodic_orbit, default_cfg):
    res = check_crossval(periodic_orbit.samples, 1.0, cfg=default_cfg)
    assert res.passed
    assert res.measured <= 1e-6


def test_crossval_single_safe_sample_is_trivial():
    st = RegularizedState(Q1=1.0, Q2=1.0, P1=0.5, P2=0.5)
    traj = Trajectory(samples=(st,), events=(), m=1.0)
    assert cross_validate(traj, 1.0) == 0.0


def test_crossval_requires_safe_arc():
    st = RegularizedState(Q1=0.01, Q2=1.0, P1=0.5, P2=0.5)
    traj = Trajectory(samples=(st,), events=(), m=1.0)
    with pytest.raises(NoSafeArc):
        cross_validate(traj, 1.0)
    res = check_crossval(traj, 1.0)
    assert not res.passed
    assert res.measured == math.inf


def test_monotone_x2_on_low_arc(dense_low_arc):
    res = check_monotone_x2(dense_low_arc)
    assert res.passed
    assert res.measured > 0.0


def test_monotone_x2_fails_past_threshold(default_cfg):
    start = bc_initial_state(math.sqrt(20.0), 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))
    res = check_monotone_x2(traj)
    assert not res.passed
    assert res.measured < 0.0


def test_monotone_x2_vacuous_on_single_sample():
    st = RegularizedState(Q1=1.0, Q2=1.0, P1=0.0, P2=0.0)
    traj = Trajectory(samples=(st,), events=(), m=1.0)
    res = check_monotone_x2(traj)
    assert res.passed
    assert res.measured == math.inf


def test_sum_identity_rhs_at_total_collapse():
    assert sum_identity_rhs(0.0, 0.0, 1.0, -1.0) == 0.0


def test_sum_identity_on_dense_arc(dense_low_arc):
    res = check_sum_identity(dense_low_arc, 1.0)
    assert res.passed
    assert res.measured <= 1e-5


def test_sum_starts_at_zero_and_never_decreases(dense_low_arc):
    u = [st.P1 * st.Q1 + st.P2 * st.Q2 for st in dense_low_arc.samples]
    assert u[0] == 0.0
    assert all(b >= a - 1e-9 for a, b in zip(u, u[1:]))


def test_sum_identity_catches_corruption(dense_low_arc):
    bad = _with_bumped_sample(dense_low_arc, len(dense_low_arc.samples) // 2, P1=0.05)
    res = check_sum_identity(bad, 1.0)
    assert not res.passed


def test_report_all_pass(dense_low_arc, dense_cfg):
    report = build_report(dense_low_arc, 1.0, cfg=dense_cfg, include_monotone=True)
    assert report.passed
    assert report.failed == ()
    names = {c.name for c in report.checks}
    assert names == {
        "gamma_conservation",
        "energy_consistency",
        "newtonian_crossval",
        "sum_identity",
        "monotone_x2",
    }


def test_report_monotone_opt_in(periodic_orbit, default_cfg):
    # a full period retraces x2, so the monotone check must stay opt-in
    base = build_report(periodic_orbit.samples, 1.0, cfg=default_cfg)
    assert all(c.name != "monotone_x2" for c in base.checks)


def test_report_serializes(dense_low_arc, dense_cfg):
    report = build_report(dense_low_arc, 1.0, cfg=dense_cfg)
    payload = json.dumps(report.to_dict())
    round_trip = json.loads(payload)
    assert round_trip["passed"] is True
    assert {c["name"] for c in round_trip["checks"]} >= {"gamma_conservation"}

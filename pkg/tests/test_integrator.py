"""Adaptive integrator: step control, events, dense output, determinism."""

from __future__ import annotations

import math

import pytest

from collinear4 import (
    CollisionKind,
    IntegratorConfig,
    RegularizedState,
    StopCondition,
    Trajectory,
    bc_initial_state,
    first_sbc,
    integrate,
    regularized_vector_field,
    sbc_p1_magnitude,
)
from collinear4.errors import HorizonExceeded, TotalCollapse


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=1e-15)
    with pytest.raises(ValueError):
        IntegratorConfig(abs_tol=-1e-10)
    with pytest.raises(ValueError):
        IntegratorConfig(event_tol_s=1e-2)  # must stay below initial_step
    with pytest.raises(ValueError):
        IntegratorConfig(max_step=math.inf)


def test_stop_condition_constructors():
    assert StopCondition.horizon().mode == "s_end"
    assert StopCondition.at_s(1.5).s_end == 1.5
    assert StopCondition.first(CollisionKind.BC).event_count == 1
    assert StopCondition.nth(CollisionKind.SBC, 3).event_count == 3
    with pytest.raises(ValueError):
        StopCondition.nth(CollisionKind.SBC, 0)


def test_trajectory_requires_increasing_s():
    a = RegularizedState(1.0, 1.0, 0.0, 0.0, s=0.0)
    b = RegularizedState(1.1, 1.0, 0.0, 0.0, s=0.0)
    with pytest.raises(ValueError):
        Trajectory(samples=(a, b), events=(), m=1.0)


def test_first_sbc_boundary_values(default_cfg):
    hit = first_sbc(2.295, 1.0, default_cfg)
    assert hit.kind is CollisionKind.SBC
    assert 0.5 < hit.s < 1.2
    assert abs(hit.state.Q1) <= 1e-10
    # the regularized Hamiltonian forces |P1| at any first SBC
    assert abs(hit.state.P1) == pytest.approx(sbc_p1_magnitude(1.0), abs=1e-8)
    assert hit.state.P1 < 0.0  # the flow reaches the section from above
    # crossing derivative equals the vector field's dQ1 at the event state
    field = regularized_vector_field(hit.state, 1.0)
    assert hit.crossing_derivative == pytest.approx(field.dQ1, rel=1e-9)
    assert hit.crossing_derivative < 0.0


@pytest.mark.parametrize("m", [0.5, 2.0])
def test_first_sbc_p1_for_other_mass_ratios(m, default_cfg):
    hit = first_sbc(1.8, m, default_cfg)
    assert abs(hit.state.P1) == pytest.approx(sbc_p1_magnitude(m), abs=1e-8)


def test_event_stop_final_sample_is_event_state(default_cfg):
    start = bc_initial_state(2.295, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))
    assert traj.events[-1].kind is CollisionKind.SBC
    assert traj.end == traj.events[-1].state


def test_nth_event_stop(default_cfg):
    start = bc_initial_state(2.2955922586625088, 1.0)
    second = integrate(start, 1.0, default_cfg, StopCondition.nth(CollisionKind.SBC, 2))
    first = integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))
    # quarter-period structure: SBC events at s1 and 3*s1, BC between them
    assert second.end.s == pytest.approx(3.0 * first.end.s, rel=1e-6)
    kinds = [ev.kind for ev in second.events]
    assert kinds[0] is CollisionKind.SBC
    assert CollisionKind.BC in kinds[1:]


def test_exact_s_target(default_cfg):
    start = bc_initial_state(2.0, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.at_s(0.35))
    assert traj.end.s == 0.35


def test_horizon_run_ends_exactly_at_horizon():
    cfg = IntegratorConfig(s_horizon=0.3)
    traj = integrate(bc_initial_state(2.0, 1.0), 1.0, cfg, StopCondition.horizon())
    assert traj.end.s == 0.3


def test_zero_span_returns_single_sample(default_cfg):
    start = bc_initial_state(2.0, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.at_s(0.0))
    assert len(traj.samples) == 1
    assert traj.start == start


def test_unreached_event_raises_horizon_exceeded():
    cfg = IntegratorConfig(s_horizon=0.05)
    with pytest.raises(HorizonExceeded):
        integrate(
            bc_initial_state(2.295, 1.0),
            1.0,
            cfg,
            StopCondition.first(CollisionKind.SBC),
        )


def test_total_collapse_detected(default_cfg):
    start = RegularizedState(Q1=1e-11, Q2=1e-11, P1=0.0, P2=0.0)
    with pytest.raises(TotalCollapse):
        integrate(start, 1.0, default_cfg, StopCondition.at_s(1.0))


def test_self_convergence():
    start = bc_initial_state(2.295, 1.0)
    loose = integrate(
        start, 1.0, IntegratorConfig(rel_tol=1e-8, abs_tol=1e-8), StopCondition.at_s(0.6)
    )
    tight = integrate(
        start, 1.0, IntegratorConfig(rel_tol=1e-13, abs_tol=1e-13), StopCondition.at_s(0.6)
    )
    for la, ta in zip(loose.end.astuple(), tight.end.astuple()):
        assert la == pytest.approx(ta, abs=2e-7)


def test_determinism_bitwise(default_cfg):
    start = bc_initial_state(2.295, 1.0)
    a = integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))
    b = integrate(start, 1.0, default_cfg, StopCondition.first(CollisionKind.SBC))
    assert len(a.samples) == len(b.samples)
    for sa, sb in zip(a.samples, b.samples):
        assert sa.astuple() == sb.astuple() and sa.s == sb.s


def test_dense_output_matches_direct_integration(default_cfg):
    start = bc_initial_state(2.295, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.at_s(0.6))
    for s_query in (0.05, 0.17, 0.33, 0.51):
        direct = integrate(start, 1.0, default_cfg, StopCondition.at_s(s_query))
        interp = traj.interpolate(s_query)
        for a, b in zip(interp.astuple(), direct.end.astuple()):
            assert a == pytest.approx(b, abs=1e-7)


def test_dense_output_clamps_to_ends(default_cfg):
    start = bc_initial_state(2.0, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.at_s(0.4))
    assert traj.interpolate(-1.0) == traj.start
    assert traj.interpolate(99.0) == traj.end


def test_state_at_time_inverts_time_map(default_cfg):
    start = bc_initial_state(2.295, 1.0)
    traj = integrate(start, 1.0, default_cfg, StopCondition.at_s(0.6))
    probe = traj.interpolate(0.44)
    recovered = traj.state_at_time(probe.t)
    assert recovered.s == pytest.approx(0.44, abs=1e-9)

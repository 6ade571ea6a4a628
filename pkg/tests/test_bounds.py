"""Monotonicity threshold: quartic root, analytic bound, turning detection."""

from __future__ import annotations

import math

import numpy as np
import pytest

from collinear4 import (
    a0_analytic_bound,
    a0_estimate,
    detect_turning_point,
    numeric_a0,
    solve_turning_quartic,
    turning_quartic,
)

# Frozen reference values, computed once at high precision and pinned here so
# regressions in the solver or the closed forms are caught immediately.
QUARTIC_ROOTS = {0.5: 3.3753223802133645, 1.0: 2.766407011827052, 2.0: 2.2998696928637554}
ANALYTIC_BOUNDS = {0.5: 3.1143561964925985, 1.0: 6.484435331765856, 2.0: 14.96480183577099}


@pytest.mark.parametrize("m", sorted(QUARTIC_ROOTS))
def test_quartic_root_pinned(m):
    assert solve_turning_quartic(m) == pytest.approx(QUARTIC_ROOTS[m], abs=1e-10)


@pytest.mark.parametrize("m", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_quartic_residual_small(m):
    a = solve_turning_quartic(m)
    assert a > 1.0
    assert abs(turning_quartic(a, m)) <= 1e-12


@pytest.mark.parametrize("m", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_quartic_root_matches_polynomial_solver(m):
    # independent route: full root set of the same quartic via the companion
    # matrix, filtered to the real root above 1
    roots = np.roots([1.0, 0.0, -2.0, -16.0 / m, 1.0])
    real = [r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 1.0]
    assert len(real) == 1
    assert solve_turning_quartic(m) == pytest.approx(real[0], abs=1e-9)


@pytest.mark.parametrize("m", sorted(ANALYTIC_BOUNDS))
def test_analytic_bound_pinned(m):
    assert a0_analytic_bound(m) == pytest.approx(ANALYTIC_BOUNDS[m], abs=1e-10)


@pytest.mark.parametrize("m", [0.25, 0.5, 1.0, 2.0, 4.0])
def test_analytic_bound_algebraic_identity(m):
    # 1/2 + 4m a^2 (a^2+1)/(a^2-1)^2 expands to the partial-fraction form the
    # implementation uses; both must agree at the quartic root
    a = solve_turning_quartic(m)
    u = a * a - 1.0
    compact = 0.5 + 4.0 * m * a * a * (a * a + 1.0) / (u * u)
    assert a0_analytic_bound(m) == pytest.approx(compact, rel=1e-13)


@pytest.mark.parametrize("A", [1.0, 3.0, 5.0, 6.4, 6.4844])
def test_no_turning_point_below_threshold(A, default_cfg):
    assert detect_turning_point(math.sqrt(A), 1.0, default_cfg) is None


def test_no_turning_point_on_periodic_orbit(orbit_result, default_cfg):
    assert detect_turning_point(orbit_result.R_star, 1.0, default_cfg) is None


@pytest.mark.parametrize(
    "A, t_star, x2_at",
    [
        (7.0, 4.543407, 1.5278658),
        (8.0, 2.875105, 1.1726130),
        (20.0, 1.151842, 0.6453349),
    ],
)
def test_turning_point_above_threshold(A, t_star, x2_at, default_cfg):
    tp = detect_turning_point(math.sqrt(A), 1.0, default_cfg)
    assert tp is not None
    assert tp.t_star == pytest.approx(t_star, abs=1e-3)
    assert tp.x2_at == pytest.approx(x2_at, abs=1e-4)
    assert tp.s_star > 0.0


def test_numeric_threshold(default_cfg):
    a0 = numeric_a0(1.0, default_cfg)
    assert a0 == pytest.approx(6.7156, abs=2e-4)
    assert a0 >= a0_analytic_bound(1.0) - 1e-4


def test_estimate_bundle(default_cfg):
    est = a0_estimate(1.0, default_cfg)
    assert est.a_root == pytest.approx(QUARTIC_ROOTS[1.0], abs=1e-10)
    assert est.analytic_bound == pytest.approx(ANALYTIC_BOUNDS[1.0], abs=1e-10)
    assert est.numeric_threshold is None
    full = a0_estimate(1.0, default_cfg, numeric=True)
    assert full.numeric_threshold == pytest.approx(6.7156, abs=2e-4)


def test_rejects_invalid_mass():
    with pytest.raises(ValueError):
        solve_turning_quartic(-1.0)
    with pytest.raises(ValueError):
        a0_analytic_bound(0.0)

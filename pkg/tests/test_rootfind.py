"""Safeguarded scalar root finding used by the quartic and shooting solvers."""

from __future__ import annotations

import math

import pytest

from collinear4.errors import NoConvergence, NoSignChange
from collinear4.rootfind import bracketed_root, expand_upward


def test_finds_cosine_root():
    x, fx = bracketed_root(math.cos, 1.0, 2.0, xtol=1e-14)
    assert x == pytest.approx(math.pi / 2.0, abs=1e-12)
    assert abs(fx) < 1e-12


def test_honors_ftol():
    x, fx = bracketed_root(lambda x: x * x - 2.0, 0.0, 2.0, ftol=1e-3)
    assert abs(fx) <= 1e-3
    assert x == pytest.approx(math.sqrt(2.0), abs=1e-3)


def test_exact_root_at_endpoint():
    x, fx = bracketed_root(lambda x: x - 1.0, 1.0, 2.0)
    assert (x, fx) == (1.0, 0.0)
    x, fx = bracketed_root(lambda x: x - 2.0, 1.0, 2.0)
    assert (x, fx) == (2.0, 0.0)


def test_rejects_same_sign_bracket():
    with pytest.raises(NoSignChange):
        bracketed_root(lambda x: x * x + 1.0, -1.0, 1.0)


def test_iteration_budget_enforced():
    # cos never evaluates to exactly 0.0 at a double, so with xtol=ftol=0 the
    # solver can only exit through its iteration budget
    with pytest.raises(NoConvergence):
        bracketed_root(math.cos, 1.0, 2.0, xtol=0.0, ftol=0.0, max_iter=3)


def test_trace_records_every_evaluation():
    trace = []
    calls = []

    def f(x):
        calls.append(x)
        return x - 0.3

    bracketed_root(f, 0.0, 1.0, xtol=1e-12, trace=trace)
    assert [x for x, _ in trace] == calls
    assert all(fx == x - 0.3 for x, fx in trace)


def test_flat_function_converges_within_budget():
    # x**21 is nearly flat around the root; pure secant stagnates here, the
    # forced bisection every third step keeps the bracket shrinking.
    x, fx = bracketed_root(lambda x: x**21, -1.0, 2.0, xtol=1e-13, max_iter=200)
    assert abs(x) < 1e-2
    assert abs(fx) < 1e-12


def test_steep_offset_root():
    f = lambda x: math.tanh(50.0 * (x - 0.7))
    x, _ = bracketed_root(f, 0.0, 1.0, xtol=1e-13)
    assert x == pytest.approx(0.7, abs=1e-10)


def test_expand_upward_finds_sign():
    x, fx = expand_upward(lambda x: x - 10.0, 1.0, 2.0, 1e3, +1.0)
    assert fx >= 0.0 and x == 16.0


def test_expand_upward_limit():
    with pytest.raises(NoSignChange):
        expand_upward(lambda x: -1.0, 1.0, 2.0, 100.0, +1.0)


def test_expand_upward_trace():
    trace = []
    expand_upward(lambda x: x - 5.0, 1.0, 2.0, 100.0, +1.0, trace=trace)
    assert [x for x, _ in trace] == [1.0, 2.0, 4.0, 8.0]

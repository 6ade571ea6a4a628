"""Shared fixtures: the m=1 orbit solve is expensive enough to cache per session."""

from __future__ import annotations

import pytest

from collinear4 import (
    IntegratorConfig,
    PeriodicOrbit,
    ShootingResult,
    build_period,
    find_periodic_R,
)


@pytest.fixture(scope="session")
def default_cfg() -> IntegratorConfig:
    return IntegratorConfig()


@pytest.fixture(scope="session")
def dense_cfg() -> IntegratorConfig:
    return IntegratorConfig(max_step=1e-3)


@pytest.fixture(scope="session")
def orbit_result(default_cfg) -> ShootingResult:
    return find_periodic_R(1.0, default_cfg)


@pytest.fixture(scope="session")
def periodic_orbit(orbit_result, default_cfg) -> PeriodicOrbit:
    return build_period(orbit_result, default_cfg)

"""Shared fixtures."""

import pytest

from kapitza.config import get_settings
from kapitza.models import Grid1D, PotentialKind, PotentialSpec


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test sees settings built from its own environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def full_grid() -> Grid1D:
    return Grid1D(half_width=40.0, point_count=401)


@pytest.fixture
def coarse_grid() -> Grid1D:
    """Same box at h = 0.5, enough for the smooth bound states."""
    return Grid1D(half_width=40.0, point_count=161)


@pytest.fixture
def tiny_grid() -> Grid1D:
    return Grid1D(half_width=10.0, point_count=41)


@pytest.fixture
def imaginary_spec() -> PotentialSpec:
    return PotentialSpec(v0=9.0, beta=0.02, omega=10.0, kind=PotentialKind.IMAGINARY)


@pytest.fixture
def real_spec() -> PotentialSpec:
    return PotentialSpec(v0=9.0, beta=0.02, omega=10.0, kind=PotentialKind.REAL)


@pytest.fixture
def wide_grid() -> Grid1D:
    """Box wide enough for the shallow bound state's tail (decay length ~ 30)."""
    return Grid1D(half_width=120.0, point_count=241)

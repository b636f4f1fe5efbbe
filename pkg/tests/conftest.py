"""Shared fixtures.  Systems are memoized module-side, so session scope here
only saves the fixture plumbing, not the numerics."""

import pytest

from skewrh import Potential, get_system


@pytest.fixture(scope="session")
def d2_potential():
    return Potential((0.0, 0.0, 0.5))


@pytest.fixture(scope="session")
def d4_potential():
    return Potential((0.0, 0.0, 0.0, 0.0, 1.0))


@pytest.fixture(scope="session")
def d2_system(d2_potential):
    return get_system(d2_potential, 6)


@pytest.fixture(scope="session")
def d4_system(d4_potential):
    return get_system(d4_potential, 4)

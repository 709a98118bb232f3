import pytest

from orbitmodp.dynamics import AffinePolyMap, normalize
from orbitmodp.orbits import orbit_census


def quadratic(c):
    return AffinePolyMap((c, 0, 1))


@pytest.fixture(scope="session")
def z2p1():
    return quadratic(1)


@pytest.fixture(scope="session")
def start0():
    return normalize([0, 1])


@pytest.fixture(scope="session")
def census_1e4(z2p1, start0):
    return orbit_census(z2p1, start0, 10**4)


@pytest.fixture(scope="session")
def census_1e5(z2p1, start0):
    return orbit_census(z2p1, start0, 10**5)


@pytest.fixture(scope="session")
def census_x5(z2p1, start0):
    """The tiny hand-checkable census: p = 2, 3, 5 with m = 2, 3, 3."""
    return orbit_census(z2p1, start0, 5)

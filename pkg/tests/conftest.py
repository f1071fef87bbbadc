import pytest

from coexlab.constructions import ring_221


@pytest.fixture(scope="session")
def ring_v():
    return ring_221(5, 0, 1, name="V")


@pytest.fixture(scope="session")
def ring_w():
    return ring_221(5, 1, 0, name="W")


@pytest.fixture(scope="session")
def ring_x():
    return ring_221(5, 0, 0, name="X")


@pytest.fixture()
def z():
    return (1, 0, 0)

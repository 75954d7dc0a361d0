import pytest

from wehlerk3.field import PrimeField
from wehlerk3.fixtures import w1_surface


@pytest.fixture(scope="session")
def F29():
    return PrimeField(29)


@pytest.fixture(scope="session")
def w1_29():
    return w1_surface(29)


@pytest.fixture(scope="session")
def w1_qq():
    return w1_surface()

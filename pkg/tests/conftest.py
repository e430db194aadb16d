import numpy as np
import pytest

from wittkit.rings import ring_from_name


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def f2():
    return ring_from_name("F2")


@pytest.fixture
def f4():
    return ring_from_name("F4")


@pytest.fixture
def z4():
    return ring_from_name("Z4")


@pytest.fixture
def f2e():
    return ring_from_name("F2e")


@pytest.fixture(params=["F2", "Z4", "F4", "F2e", "F3", "Z9"])
def ring(request):
    return ring_from_name(request.param)

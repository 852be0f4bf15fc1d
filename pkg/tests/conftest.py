import random

import pytest

from allproofs import default_ctx
from allproofs.curve import SCALAR_ORDER


@pytest.fixture(scope="session")
def ctx():
    return default_ctx()


@pytest.fixture
def rng():
    return random.Random(0xA11)


def rand_scalar(rng, nonzero=False):
    value = rng.randrange(1 if nonzero else 0, SCALAR_ORDER)
    return value


@pytest.fixture
def scalars():
    def make(rng, count, nonzero=False):
        return [rand_scalar(rng, nonzero) for _ in range(count)]

    return make

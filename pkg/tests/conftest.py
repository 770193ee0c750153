import random

import pytest

from hyml.fixtures import desk_signature, fixture_m0, fixture_m0_ml, m0_signature


@pytest.fixture
def sig():
    return m0_signature()


@pytest.fixture
def desk():
    return desk_signature()


@pytest.fixture
def m0():
    return fixture_m0()


@pytest.fixture
def m0_ml():
    return fixture_m0_ml()


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)

import random

import pytest

from lefschetz.services.algebra import Surface
from lefschetz.services.fixtures import get_fixture


@pytest.fixture
def rng():
    return random.Random(20240917)


@pytest.fixture
def torus():
    return Surface(1)


@pytest.fixture
def genus2():
    return Surface(2)


@pytest.fixture
def g1_chain():
    return get_fixture("g1-chain")


@pytest.fixture
def g2_matsumoto():
    return get_fixture("g2-matsumoto")


@pytest.fixture(scope="session")
def g3_seed():
    return get_fixture("g3-chain7")

import pytest

import helpers
from raagspace.blowup import build_blowup, salvetti


@pytest.fixture
def g0():
    return helpers.gamma0()


@pytest.fixture
def parts(g0):
    return helpers.example_partitions(g0)


@pytest.fixture
def c4():
    return helpers.four_cycle()


@pytest.fixture
def s0(g0):
    return salvetti(g0)


@pytest.fixture
def bq(g0, parts):
    return build_blowup(g0, [parts["Q"]])


@pytest.fixture
def bwq(g0, parts):
    return build_blowup(g0, [parts["W"], parts["Q"]])

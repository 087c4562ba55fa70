import random

import pytest

from picard_theta import FieldCtx, FqField

FIELDS = (-1, -3, -7)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture(params=FIELDS)
def ctx(request):
    return FieldCtx(request.param)


@pytest.fixture(params=[(3, -1), (5, -3)], ids=["F9", "F25"])
def field(request):
    return FqField(*request.param)

import functools

import pytest

from charp_nbg.config import load_tower
from charp_nbg.ramify import ramification_data

AS_CONFIGS = {"q2b1": (2, 1), "q2b3": (2, 3), "q3b1": (3, 1), "q3b2": (3, 2), "q4b1": (4, 1), "q4b3": (4, 3)}


@functools.lru_cache(maxsize=None)
def shipped(name):
    return load_tower(name)[0]


@functools.lru_cache(maxsize=None)
def shipped_data(name):
    return ramification_data(shipped(name))


@pytest.fixture(params=sorted(AS_CONFIGS))
def as_name(request):
    return request.param

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from gradedlie.algebra import quotient
from gradedlie.freelie import build_free_algebra

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def free2():
    return build_free_algebra(5, 3, [("x", 1), ("y", 1)])


@pytest.fixture
def abelian2(free2):
    x, y = free2.generator("x"), free2.generator("y")
    return quotient(free2, [x.bracket(y)])

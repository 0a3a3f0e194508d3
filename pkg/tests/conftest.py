# tests/conftest.py
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    'richardson',
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('richardson')


@pytest.fixture
def par_canonico():
    return frozenset({(0, 0)}), frozenset({(1, 0)})


@pytest.fixture
def anillo():
    # cuatro vecinos del origen: encierran a (0, 0)
    return frozenset({(1, 0), (-1, 0), (0, 1), (0, -1)})

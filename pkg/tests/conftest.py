from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from ruminkit import build_rumin_complex, catalog

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@lru_cache(maxsize=None)
def complex_of(name: str):
    return build_rumin_complex(catalog(name))


@pytest.fixture(scope="session")
def rc_heis():
    return complex_of("heisenberg(1)")


@pytest.fixture(scope="session")
def rc_engel():
    return complex_of("engel")

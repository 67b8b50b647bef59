import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from covertd2d.core import NetworkConfig
from covertd2d.montecarlo import SimWindow, simulate

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def defaults():
    return NetworkConfig()


@pytest.fixture(scope="session")
def mc_batch(defaults):
    """10^5 trials at the default configuration, shared by all oracle comparisons."""
    return simulate(defaults, SimWindow(trials=100_000, seed=2024), p_ref=10.0)

"""
Shared fixtures: table channels and reduced-cost optimizer settings
"""
import math

import numpy as np
import pytest

from honestnoise.core.golden import TableRunner
from honestnoise.core.zoo import table_channels
from honestnoise.models.schemas import OptimizerOptions

DATA_CHANNELS = "data/channels"


@pytest.fixture(scope="session")
def channels():
    return table_channels()


@pytest.fixture(scope="session")
def fast_opts():
    """Fewer restarts than the default; the Pauli warm start carries the search"""
    return OptimizerOptions(seed=0, restarts=4, max_iter=800, workers=1, empirical_samples=10_000)


@pytest.fixture(scope="session")
def table_runner(fast_opts):
    return TableRunner(fast_opts)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_unit_vector(rng) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def sin_half(theta: float) -> float:
    return abs(math.sin(theta / 2))

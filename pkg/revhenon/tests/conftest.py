from __future__ import annotations
import numpy as np
import pytest

from revhenon.config import CONFIG
from revhenon.orbits.search import fixture_seeds


@pytest.fixture
def rng():
    return np.random.default_rng(CONFIG.sample_seed)


@pytest.fixture(scope="session")
def seeds():
    return fixture_seeds()

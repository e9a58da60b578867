from __future__ import annotations
import pytest

from revhenon.maps.catalog import catalog_instances
from revhenon.orbits.search import fixture_seeds


@pytest.fixture(scope="session")
def seeds():
    return fixture_seeds()


@pytest.fixture(scope="session")
def catalog():
    return {f.value: m for f, m in catalog_instances().items()}

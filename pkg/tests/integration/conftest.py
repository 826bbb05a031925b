import pytest

from tests.integration.planted import SEEDS


@pytest.fixture(scope="module")
def seeds():
    return SEEDS
